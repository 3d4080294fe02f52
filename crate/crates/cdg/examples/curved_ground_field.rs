// Second-kind Hochschild invariants of the curved ground field (k, 0, 1):
// one object, identity morphism only, curvature 1.  Both homology and
// cohomology are one-dimensional in even degree, over Q and over F_5.

use cdg::bicomplex::HochschildVariant;
use cdg::engines;
use cdg::sample;
use cdg::scalar::Field;
use cdg::GradingGroup;

fn main() {
    for field in [Field::Q, Field::Fp(5)] {
        let cat = sample::ground(field, GradingGroup::ModTwo, &field.one());
        assert!(cat.validate().ok());
        for variant in [HochschildVariant::Homology, HochschildVariant::Cohomology] {
            let rep =
                engines::hh_second_kind(&cat, None, variant, engines::DEFAULT_MAX_DEPTH).unwrap();
            println!("{} {variant:?}: method {}", field.name(), rep.method.label());
            for (deg, dim) in &rep.table {
                println!("  degree {deg}: dim {dim}");
            }
        }
    }
}
