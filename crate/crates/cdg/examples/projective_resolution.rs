// Minimal projective resolutions over a CDG-category.  Over the exterior
// algebra the trivial module has an infinite resolution whose ranks grow
// linearly; the engine reports honest depth exhaustion instead of a fake
// finite answer.

use cdg::io::{category_from_path, module_from_path};
use cdg::resolution::{check_resolution, projective_resolution};
use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let cat = category_from_path(&dir.join("exterior.z.json")).unwrap();
    let m = module_from_path(&cat, &dir.join("k.exterior.z.left.json")).unwrap();

    let res = projective_resolution(&cat, &m, 8).unwrap();
    check_resolution(&cat, &m, &res).unwrap();
    println!(
        "resolution of k over k[x]/x^2: complete = {}, depth exhausted = {}",
        res.complete, res.depth_exhausted
    );
    for (j, term) in res.terms.iter().enumerate() {
        println!("  P_{j}: dim {}", term.dim());
    }
}
