// The truncated bar bicomplex B(k, Lambda, k) for the exterior algebra
// Lambda = k[x]/x^2 with |x| = 1: weight dimensions, the three structural
// identities, and the per-weight homology of the weight-lowering map.

use std::collections::HashMap;

use cdg::bicomplex::bar_bicomplex;
use cdg::category::CdgCategory;
use cdg::module::{CdgModule, ModBasis, Side};
use cdg::sample;
use cdg::scalar::Field;
use cdg::GradingGroup;

// one generator killed by the augmentation ideal, fixed by the unit
fn trivial_module(cat: &CdgCategory, side: Side) -> CdgModule {
    let unit_idx = cat.unit[0][0].0;
    let mut action = HashMap::new();
    for f in 0..cat.basis.len() {
        let img = if f == unit_idx {
            vec![(0usize, cat.field.one())]
        } else {
            Vec::new()
        };
        action.insert((f, 0usize), img);
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

fn main() {
    let t = 6;
    let cat = sample::exterior(Field::Q, GradingGroup::Int);
    let n = trivial_module(&cat, Side::Right);
    let m = trivial_module(&cat, Side::Left);
    let bc = bar_bicomplex(&cat, &n, &m, t).unwrap();

    assert!(bc.check_identities().ok());
    println!("identities del^2 = 0, [del, d] = 0, d^2 + [del, delta] = 0: ok");
    for i in 0..=t {
        println!("weight {i}: dim {}", bc.dims(i));
    }
    // per-weight homology of del; each Tor group here is one-dimensional
    for i in 0..t - 1 {
        let h = bc.dims(i) - bc.toward(i).rank() - bc.toward(i + 1).rank();
        println!("H_{i}(del): dim {h}");
    }
}
