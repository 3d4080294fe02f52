// Functoriality of the bar construction: a change of connection tau gives
// a CDG-functor from the twisted category back to the original, and its
// pushforward on bar bicomplexes is an exact chain map.

use rand::SeedableRng;

use cdg::bicomplex::pushforward_bar;
use cdg::functor::CdgFunctor;
use cdg::module::{free_cdg_on_generators, Side};
use cdg::sample;

fn main() {
    let t = 5;
    let cat = sample::dual_numbers(cdg::Field::Q, cdg::GradingGroup::ModTwo);
    let n = free_cdg_on_generators(&cat, Side::Right, &[(0, cat.grading.zero())]).unwrap();
    let m = free_cdg_on_generators(&cat, Side::Left, &[(0, cat.grading.zero())]).unwrap();

    // strict case: the identity functor
    let id = CdgFunctor::identity(&cat);
    let push = pushforward_bar(&cat, &cat, &id, &n, &m, t).unwrap();
    assert!(push.check_chain_map().ok());
    println!("identity pushforward is a chain map at truncation {t}");

    // nonstrict case: twist by a random odd connection change
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let tau = sample::random_tau(&cat, &mut rng);
    let twisted = cat.change_connection(&tau).unwrap();
    let g = CdgFunctor::twist(&twisted, &tau);
    let push = pushforward_bar(&twisted, &cat, &g, &n, &m, t).unwrap();
    assert!(push.check_chain_map().ok());
    println!("twist pushforward is a chain map at truncation {t}");
}
