// Shifting the curvature of a CDG-category by c times the units changes
// nothing observable: the enveloping category is equal on the nose and the
// second-kind Hochschild table is unchanged.

use cdg::bicomplex::HochschildVariant;
use cdg::engines;
use cdg::sample;
use cdg::scalar::Field;
use cdg::GradingGroup;

fn main() {
    let q = Field::Q;
    let cat = sample::mat2(q, GradingGroup::ModTwo);
    for c in [q.one(), q.one().neg(), q.from_ratio(2, 3).unwrap()] {
        let rep = engines::curvature_shift_check(
            &cat,
            &c,
            HochschildVariant::Homology,
            engines::DEFAULT_MAX_DEPTH,
        )
        .unwrap();
        println!(
            "shift by {c}: envelope identity {}, tables {}",
            if rep.envelope_identity { "holds" } else { "FAILS" },
            if rep.compare.equal { "EQUAL" } else { "UNEQUAL" },
        );
        assert!(rep.envelope_identity && rep.compare.equal);
    }
}
