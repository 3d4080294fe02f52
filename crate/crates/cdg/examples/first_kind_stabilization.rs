// Truncation stabilization for first-kind invariants: the endomorphism
// DG-algebra of the free rank-one CDG-module over (k, 0, 1) is uncurved,
// and its first-kind Hochschild homology vanishes.  The engine certifies
// this by agreement of consecutive truncations away from the boundary.

use cdg::bicomplex::HochschildVariant;
use cdg::engines;
use cdg::module::{free_cdg_on_generators, mf_category, Side};
use cdg::sample;
use cdg::scalar::Field;
use cdg::GradingGroup;

fn main() {
    let base = sample::ground(Field::Q, GradingGroup::ModTwo, &Field::Q.one());
    let free = free_cdg_on_generators(&base, Side::Right, &[(0, base.grading.zero())]).unwrap();
    let end = mf_category(&base, &[free], false).unwrap();
    assert!(end.is_uncurved());
    println!("End(free rank 1) has dimension {}", end.basis.len());

    let rep = engines::hh_first_kind(&end, None, HochschildVariant::Homology, 3).unwrap();
    println!("HH^I method: {}", rep.method.label());
    println!("table: {:?} (empty = zero homology)", rep.table);
}
