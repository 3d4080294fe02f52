//! Standard small CDG-algebras and a seeded generator of random valid
//! CDG-categories, used by the property suites and the examples.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{BasisMor, CdgCategory};
use crate::grading::{Degree, GradingGroup, GradingMorphism};
use crate::matrix::{linvec_normalize, LinVec};
use crate::scalar::{Field, Scalar};

/// Build a one-object category from explicit tables.  `mult[f][g]` is the
/// product `basis[f] . basis[g]`.
pub fn algebra(
    field: Field,
    grading: GradingGroup,
    names_degrees: &[(&str, i64)],
    mult: &[Vec<LinVec>],
    unit: LinVec,
    diff: Vec<LinVec>,
    curvature: LinVec,
) -> CdgCategory {
    let basis = names_degrees
        .iter()
        .map(|(name, d)| BasisMor {
            name: (*name).into(),
            src: 0,
            dst: 0,
            degree: grading.canon(*d),
        })
        .collect();
    let mut compose = HashMap::new();
    for (f, row) in mult.iter().enumerate() {
        for (g, v) in row.iter().enumerate() {
            let v = linvec_normalize(v.clone());
            if !v.is_empty() {
                compose.insert((f, g), v);
            }
        }
    }
    CdgCategory {
        field,
        grading,
        objects: vec!["*".into()],
        basis,
        compose,
        unit: vec![unit],
        diff,
        curvature: vec![curvature],
    }
}

/// The ground field as a CDG-algebra `(k, 0, c)`: one object, basis `{e}`,
/// zero differential, curvature `c * e`.  A nonzero `c` needs `2 * one = 0`,
/// i.e. the `Z/2` grading.
pub fn ground(field: Field, grading: GradingGroup, c: &Scalar) -> CdgCategory {
    let e = field.one();
    algebra(
        field,
        grading,
        &[("e", 0)],
        &[vec![vec![(0, e)]]],
        vec![(0, field.one())],
        vec![vec![]],
        if c.is_zero() { vec![] } else { vec![(0, c.clone())] },
    )
}

/// Exterior algebra on one odd generator: `k[x]/(x^2)` with `|x| = 1`,
/// `d = 0`, `h = 0`.  Over the `Z` grading this is the square-zero algebra
/// with `x` in degree 1.
pub fn exterior(field: Field, grading: GradingGroup) -> CdgCategory {
    let one = field.one();
    algebra(
        field,
        grading,
        &[("e", 0), ("x", 1)],
        &[
            vec![vec![(0, one.clone())], vec![(1, one.clone())]],
            vec![vec![(1, one)], vec![]],
        ],
        vec![(0, field.one())],
        vec![vec![], vec![]],
        vec![],
    )
}

/// Dual numbers `k[ε]/(ε^2)` with `ε` in degree 0.
pub fn dual_numbers(field: Field, grading: GradingGroup) -> CdgCategory {
    let one = field.one();
    algebra(
        field,
        grading,
        &[("e", 0), ("eps", 0)],
        &[
            vec![vec![(0, one.clone())], vec![(1, one.clone())]],
            vec![vec![(1, one)], vec![]],
        ],
        vec![(0, field.one())],
        vec![vec![], vec![]],
        vec![],
    )
}

/// Truncated polynomials `k[x]/(x^4)` with `|x| = 1`, `d = 0`, and
/// curvature `h = x^2`.  A commutative CDG-algebra whose curvature is not
/// a multiple of the unit, so curvature actions on the two ends of a
/// tensor word do not cancel.
pub fn truncated_poly4(field: Field, grading: GradingGroup) -> CdgCategory {
    let one = field.one();
    let mut mult = vec![vec![Vec::new(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            if i + j < 4 {
                mult[i][j] = vec![(i + j, one.clone())];
            }
        }
    }
    algebra(
        field,
        grading,
        &[("e", 0), ("x", 1), ("x2", 2), ("x3", 3)],
        &mult,
        vec![(0, field.one())],
        vec![vec![]; 4],
        vec![(2, field.one())],
    )
}

/// 2x2 matrices over `k`, concentrated in degree 0.  Basis `E_ij` maps the
/// `j`-th coordinate to the `i`-th: `E_ij . E_kl = δ_jk E_il`.
pub fn mat2(field: Field, grading: GradingGroup) -> CdgCategory {
    let idx = |i: usize, j: usize| i * 2 + j;
    let names = ["E00", "E01", "E10", "E11"];
    let mut mult = vec![vec![Vec::new(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    if j == k {
                        mult[idx(i, j)][idx(k, l)] = vec![(idx(i, l), field.one())];
                    }
                }
            }
        }
    }
    algebra(
        field,
        grading,
        &[(names[0], 0), (names[1], 0), (names[2], 0), (names[3], 0)],
        &mult,
        vec![(idx(0, 0), field.one()), (idx(1, 1), field.one())],
        vec![vec![]; 4],
        vec![],
    )
}

/// A random odd endomorphism of each object, with coefficients in
/// `{-1, 0, 1}`.  Any such family is a legal change of connection.
pub fn random_tau(cat: &CdgCategory, rng: &mut ChaCha8Rng) -> Vec<LinVec> {
    let mut tau = Vec::new();
    for x in 0..cat.num_objects() {
        let mut t: LinVec = Vec::new();
        for i in cat.basis_in_hom(x, x) {
            if cat.degree(i) == cat.grading.one() && rng.gen_bool(0.5) {
                let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                t.push((i, cat.field.from_i64(c)));
            }
        }
        tau.push(t);
    }
    tau
}

/// A seeded random valid CDG-category: a random seed algebra transformed by
/// a few random structure-preserving constructions.  Total basis size is
/// capped so downstream bar-type complexes stay small.
pub fn random_category(seed: u64) -> CdgCategory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = if rng.gen_bool(0.5) {
        Field::Q
    } else {
        *[Field::Fp(2), Field::Fp(3), Field::Fp(5)]
            .iter()
            .nth(rng.gen_range(0..3))
            .unwrap()
    };
    let grading = if rng.gen_bool(0.5) {
        GradingGroup::Int
    } else {
        GradingGroup::ModTwo
    };
    let mut cat = match rng.gen_range(0..4) {
        0 => {
            let c = if grading == GradingGroup::ModTwo {
                field.from_i64(rng.gen_range(-1..2))
            } else {
                field.zero()
            };
            ground(field, grading, &c)
        }
        1 => exterior(field, grading),
        2 => dual_numbers(field, grading),
        _ => mat2(field, grading),
    };
    for _ in 0..rng.gen_range(0..3) {
        match rng.gen_range(0..4) {
            0 => cat = cat.opposite(),
            1 => {
                // tensor with a tiny factor, capped at 4 basis morphisms total
                if cat.basis.len() <= 2 {
                    let factor = if rng.gen_bool(0.5) {
                        exterior(cat.field, cat.grading)
                    } else {
                        dual_numbers(cat.field, cat.grading)
                    };
                    cat = cat.tensor(&factor).unwrap();
                }
            }
            2 => {
                let tau = random_tau(&cat, &mut rng);
                cat = cat.change_connection(&tau).unwrap();
            }
            _ => {
                if cat.grading == GradingGroup::ModTwo {
                    let c = cat.field.from_i64(rng.gen_range(-1..2));
                    cat = cat.curvature_shift(&c).unwrap();
                }
            }
        }
    }
    if cat.grading == GradingGroup::Int && rng.gen_bool(0.25) {
        let phi = GradingMorphism::new(GradingGroup::Int, GradingGroup::ModTwo).unwrap();
        cat = cat.pushforward(&phi).unwrap();
    }
    cat
}

/// A random valid CDG-module: a free CDG-module on random generators,
/// optionally shifted and twisted by a Maurer-Cartan endomorphism.
pub fn random_module(
    cat: &CdgCategory,
    side: crate::module::Side,
    rng: &mut ChaCha8Rng,
) -> crate::module::CdgModule {
    use crate::module::{free_cdg_on_generators, hom_space, ModuleMorphism};
    let ngens = rng.gen_range(1..3);
    let generators: Vec<(usize, Degree)> = (0..ngens)
        .map(|_| {
            (
                rng.gen_range(0..cat.num_objects()),
                cat.grading.canon(rng.gen_range(-1..2)),
            )
        })
        .collect();
    let mut m = free_cdg_on_generators(cat, side, &generators).expect("free module");
    if rng.gen_bool(0.4) {
        m = m.shift(cat, cat.grading.canon(rng.gen_range(-1..2)));
    }
    if rng.gen_bool(0.5) {
        // try a few random degree-1 endomorphisms; keep one satisfying
        // the Maurer-Cartan equation so the twist stays CDG
        let basis = hom_space(cat, &m, &m, cat.grading.one());
        'attempt: for _ in 0..4 {
            if basis.is_empty() {
                break;
            }
            let mut map: Vec<crate::matrix::LinVec> = vec![Vec::new(); m.dim()];
            for b in &basis {
                if rng.gen_bool(0.5) {
                    let c = cat.field.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 });
                    for (i, col) in b.map.iter().enumerate() {
                        crate::matrix::linvec_axpy(&mut map[i], &c, col);
                    }
                }
            }
            let tau = ModuleMorphism {
                degree: cat.grading.one(),
                map,
            };
            // MC: d(τ) + τ² = 0
            let dtau = tau.differential(cat, &m, &m);
            for i in 0..m.dim() {
                let mut v = dtau.map[i].clone();
                crate::matrix::linvec_axpy(&mut v, &cat.field.one(), &tau.apply(&tau.map[i]));
                if !v.is_empty() {
                    continue 'attempt;
                }
            }
            m = m.twist(cat, &tau).expect("valid twist");
            break;
        }
    }
    m
}

/// Degrees occurring among basis morphisms, canonicalized and sorted.
pub fn basis_degrees(cat: &CdgCategory) -> Vec<Degree> {
    let mut ds: Vec<Degree> = cat.basis.iter().map(|m| m.degree).collect();
    ds.sort();
    ds.dedup();
    ds
}
