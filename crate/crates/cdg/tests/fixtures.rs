//! The checked-in fixtures (except the deliberately broken one) are exactly
//! the JSON serializations of in-library constructions, so they can always
//! be regenerated and never drift from the code.

use std::collections::HashMap;
use std::path::Path;

use serde_json::Value;

use cdg::category::CdgCategory;
use cdg::io::{category_from_path, category_to_json, module_to_json};
use cdg::module::{free_cdg_on_generators, mf_category, CdgModule, ModBasis, Side};
use cdg::sample;
use cdg::scalar::Field;
use cdg::GradingGroup;

fn fixture_value(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// The one-dimensional module where the unit acts as the identity and the
/// augmentation ideal acts as zero.
fn trivial_module(cat: &CdgCategory, side: Side) -> CdgModule {
    assert_eq!(cat.unit[0].len(), 1, "needs a single unit basis element");
    let unit_idx = cat.unit[0][0].0;
    let mut action = HashMap::new();
    for f in 0..cat.basis.len() {
        if f == unit_idx {
            action.insert((f, 0usize), vec![(0usize, cat.field.one())]);
        } else {
            action.insert((f, 0usize), Vec::new());
        }
    }
    CdgModule {
        side,
        basis: vec![ModBasis {
            name: "k".into(),
            object: 0,
            degree: cat.grading.zero(),
        }],
        action,
        diff: vec![Vec::new()],
        presentation: None,
    }
}

#[test]
fn category_fixtures_match_builtin_constructions() {
    let cq = sample::ground(Field::Q, GradingGroup::ModTwo, &Field::Q.one());
    assert_eq!(fixture_value("counterexample.q.json"), category_to_json(&cq));
    let c5 = sample::ground(Field::Fp(5), GradingGroup::ModTwo, &Field::Fp(5).one());
    assert_eq!(fixture_value("counterexample.f5.json"), category_to_json(&c5));

    let free = free_cdg_on_generators(&cq, Side::Right, &[(0, cq.grading.zero())]).unwrap();
    let end = mf_category(&cq, &[free], false).unwrap();
    assert_eq!(fixture_value("endalgebra.json"), category_to_json(&end));

    let ez = sample::exterior(Field::Q, GradingGroup::Int);
    assert_eq!(fixture_value("exterior.z.json"), category_to_json(&ez));
    let e2 = sample::exterior(Field::Q, GradingGroup::ModTwo);
    assert_eq!(fixture_value("exterior.z2.json"), category_to_json(&e2));

    let dn = sample::dual_numbers(Field::Q, GradingGroup::Int);
    assert_eq!(fixture_value("dualnumbers.json"), category_to_json(&dn));
    let m2 = sample::mat2(Field::Q, GradingGroup::Int);
    assert_eq!(fixture_value("mat2.json"), category_to_json(&m2));
    let t4 = sample::truncated_poly4(Field::Q, GradingGroup::ModTwo);
    assert_eq!(fixture_value("truncatedpoly4.json"), category_to_json(&t4));
}

#[test]
fn module_fixtures_match_builtin_constructions() {
    let ez = sample::exterior(Field::Q, GradingGroup::Int);
    assert_eq!(
        fixture_value("k.exterior.z.left.json"),
        module_to_json(&ez, &trivial_module(&ez, Side::Left))
    );
    assert_eq!(
        fixture_value("k.exterior.z.right.json"),
        module_to_json(&ez, &trivial_module(&ez, Side::Right))
    );
    let e2 = sample::exterior(Field::Q, GradingGroup::ModTwo);
    assert_eq!(
        fixture_value("k.exterior.z2.left.json"),
        module_to_json(&e2, &trivial_module(&e2, Side::Left))
    );
    let dn = sample::dual_numbers(Field::Q, GradingGroup::Int);
    assert_eq!(
        fixture_value("k.dualnumbers.left.json"),
        module_to_json(&dn, &trivial_module(&dn, Side::Left))
    );
}

#[test]
fn broken_fixture_fails_validation_for_the_right_reason() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/broken-leibniz.json");
    let cat = category_from_path(&path).unwrap();
    let report = cat.validate();
    assert!(!report.ok());
    assert!(
        report.failures.iter().any(|f| f.contains("Leibniz")),
        "{:?}",
        report.failures
    );
}
