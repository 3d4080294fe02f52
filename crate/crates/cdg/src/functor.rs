//! CDG-functors between finite CDG-categories.
//!
//! A CDG-functor `(F, a): C -> D` is a `k`-linear graded functor `F`
//! together with an odd endomorphism `a_X` of `F(X)` for each object,
//! satisfying
//!
//! ```text
//! F(d f) = d F(f) + a_Y F(f) - (-1)^{|f|} F(f) a_X     for f: X -> Y
//! F(h_X) = h_{F(X)} + d(a_X) + a_X^2
//! ```
//!
//! Dropping the second condition gives a QDG-functor; its failure is
//! measured by the functor curvature.

use crate::category::{CdgCategory, ValidationReport};
use crate::error::{CdgError, Result};
use crate::matrix::{linvec_axpy, LinVec};

#[derive(Clone, Debug)]
pub struct CdgFunctor {
    /// `obj_map[X]`: image object in the target.
    pub obj_map: Vec<usize>,
    /// `mor_map[f]`: image of the f-th source basis morphism.
    pub mor_map: Vec<LinVec>,
    /// `conn[X] = a_X`, an odd endomorphism of `F(X)`.
    pub conn: Vec<LinVec>,
}

impl CdgFunctor {
    pub fn identity(cat: &CdgCategory) -> CdgFunctor {
        CdgFunctor {
            obj_map: (0..cat.num_objects()).collect(),
            mor_map: (0..cat.basis.len())
                .map(|i| vec![(i, cat.field.one())])
                .collect(),
            conn: vec![Vec::new(); cat.num_objects()],
        }
    }

    /// The canonical CDG-functor `(Id, τ): C_τ -> C` from a change of
    /// connection to the original category.
    pub fn twist(cat: &CdgCategory, tau: &[LinVec]) -> CdgFunctor {
        CdgFunctor {
            conn: tau.to_vec(),
            ..CdgFunctor::identity(cat)
        }
    }

    /// Apply to a morphism element of the source.
    pub fn apply(&self, src: &CdgCategory, v: &LinVec) -> LinVec {
        let _ = src;
        let mut out: LinVec = Vec::new();
        for (i, c) in v {
            linvec_axpy(&mut out, c, &self.mor_map[*i]);
        }
        out
    }

    /// Structural validation as a QDG-functor, with witnesses.
    pub fn validate(&self, src: &CdgCategory, dst: &CdgCategory) -> ValidationReport {
        let mut failures = Vec::new();
        if src.field != dst.field || src.grading != dst.grading {
            failures.push("source and target disagree on field or grading".into());
            return ValidationReport { failures };
        }
        if self.obj_map.len() != src.num_objects()
            || self.mor_map.len() != src.basis.len()
            || self.conn.len() != src.num_objects()
        {
            failures.push("functor tables have wrong lengths".into());
            return ValidationReport { failures };
        }
        for &x in &self.obj_map {
            if x >= dst.num_objects() {
                failures.push(format!("object image {x} out of range"));
                return ValidationReport { failures };
            }
        }
        for (f, img) in self.mor_map.iter().enumerate() {
            let m = &src.basis[f];
            for (i, _) in img {
                let t = &dst.basis[*i];
                if t.src != self.obj_map[m.src] || t.dst != self.obj_map[m.dst] {
                    failures.push(format!("image of {} leaves its hom space", m.name));
                }
                if t.degree != m.degree {
                    failures.push(format!("image of {} is not degree-preserving", m.name));
                }
            }
        }
        for (x, a) in self.conn.iter().enumerate() {
            for (i, _) in a {
                let t = &dst.basis[*i];
                if t.src != self.obj_map[x] || t.dst != self.obj_map[x] {
                    failures.push(format!(
                        "connection at {} is not an endomorphism of the image",
                        src.objects[x]
                    ));
                }
                if t.degree != dst.grading.one() {
                    failures.push(format!("connection at {} is not odd", src.objects[x]));
                }
            }
        }
        // multiplicativity and units
        for x in 0..src.num_objects() {
            let img = self.apply(src, &src.unit[x]);
            if img != dst.identity(self.obj_map[x]) {
                failures.push(format!("F(id_{}) is not the identity", src.objects[x]));
            }
        }
        for f in 0..src.basis.len() {
            for g in 0..src.basis.len() {
                let Some(fg) = src.compose_basis(f, g) else { continue };
                let lhs = self.apply(src, &fg);
                let rhs = dst.compose_elts(&self.mor_map[f], &self.mor_map[g]);
                if lhs != rhs {
                    failures.push(format!(
                        "F is not multiplicative on ({}, {})",
                        src.basis[f].name, src.basis[g].name
                    ));
                }
            }
        }
        // differential compatibility
        for f in 0..src.basis.len() {
            let m = &src.basis[f];
            let lhs = self.apply(src, &src.diff[f]);
            let mut rhs = dst.diff_elt(&self.mor_map[f]);
            linvec_axpy(
                &mut rhs,
                &dst.field.one(),
                &dst.compose_elts(&self.conn[m.dst], &self.mor_map[f]),
            );
            let sign = src.grading.koszul_sign(m.degree, src.grading.one());
            linvec_axpy(
                &mut rhs,
                &dst.field.one().signed(sign).neg(),
                &dst.compose_elts(&self.mor_map[f], &self.conn[m.src]),
            );
            if lhs != rhs {
                failures.push(format!(
                    "differential compatibility fails on {}",
                    m.name
                ));
            }
        }
        ValidationReport { failures }
    }

    /// The functor curvature `(h_F)_X = h_{F(X)} + d(a_X) + a_X^2 - F(h_X)`.
    pub fn functor_curvature(&self, src: &CdgCategory, dst: &CdgCategory) -> Vec<LinVec> {
        (0..src.num_objects())
            .map(|x| {
                let mut h = dst.curvature_of(self.obj_map[x]);
                linvec_axpy(&mut h, &dst.field.one(), &dst.diff_elt(&self.conn[x]));
                linvec_axpy(
                    &mut h,
                    &dst.field.one(),
                    &dst.compose_elts(&self.conn[x], &self.conn[x]),
                );
                linvec_axpy(
                    &mut h,
                    &dst.field.one().neg(),
                    &self.apply(src, &src.curvature_of(x)),
                );
                h
            })
            .collect()
    }

    /// Whether the functor is CDG (vanishing functor curvature).
    pub fn is_cdg(&self, src: &CdgCategory, dst: &CdgCategory) -> bool {
        self.functor_curvature(src, dst).iter().all(|h| h.is_empty())
    }

    /// Composite `(G, b) . (F, a)` with connection `c_X = G(a_X) + b_{F(X)}`.
    pub fn compose(
        &self,
        mid: &CdgCategory,
        outer: &CdgFunctor,
    ) -> Result<CdgFunctor> {
        if self.obj_map.iter().any(|&x| x >= outer.obj_map.len()) {
            return Err(CdgError::Incompatible(
                "inner functor does not land in the outer functor's source".into(),
            ));
        }
        let obj_map: Vec<usize> = self.obj_map.iter().map(|&x| outer.obj_map[x]).collect();
        let mor_map: Vec<LinVec> = self
            .mor_map
            .iter()
            .map(|img| outer.apply(mid, img))
            .collect();
        let conn: Vec<LinVec> = (0..self.conn.len())
            .map(|x| {
                let mut c = outer.apply(mid, &self.conn[x]);
                let mut b = outer.conn[self.obj_map[x]].clone();
                linvec_axpy(&mut b, &mid.field.one(), &c);
                std::mem::swap(&mut c, &mut b);
                c
            })
            .collect();
        Ok(CdgFunctor {
            obj_map,
            mor_map,
            conn,
        })
    }
}

/// The opposite functor `F^op: B^op -> C^op` of `(F, a)`.  Basis indices
/// are unchanged by `opposite`, so the morphism table carries over; the
/// connection flips sign (the compatible choice, since `h_{X^op} = -h_X`).
pub fn opposite_functor(f: &CdgFunctor, dst: &CdgCategory) -> CdgFunctor {
    CdgFunctor {
        obj_map: f.obj_map.clone(),
        mor_map: f.mor_map.clone(),
        conn: f
            .conn
            .iter()
            .map(|a| crate::matrix::linvec_scale(a, &dst.field.one().neg()))
            .collect(),
    }
}

/// The tensor product `(F, a) ⊗ (G, b)` of functors between tensor
/// categories, with connection `a ⊗ id + id ⊗ b`.  Index conventions must
/// match [`CdgCategory::tensor`]: objects `(x, y) -> x·n₂ + y`, morphisms
/// `(f, g) -> f·b₂ + g`.
pub fn tensor_functor(
    f: &CdgFunctor,
    g: &CdgFunctor,
    src_a: &CdgCategory,
    src_b: &CdgCategory,
    dst_a: &CdgCategory,
    dst_b: &CdgCategory,
) -> CdgFunctor {
    let dn2 = dst_b.num_objects();
    let db2 = dst_b.basis.len();
    let obj_index = |x: usize, y: usize| x * dn2 + y;
    let mor_index = |p: usize, q: usize| p * db2 + q;
    let pair = |v1: &LinVec, v2: &LinVec| -> LinVec {
        let mut out = Vec::new();
        for (i1, c1) in v1 {
            for (i2, c2) in v2 {
                out.push((mor_index(*i1, *i2), c1.mul(c2)));
            }
        }
        crate::matrix::linvec_normalize(out)
    };
    let mut obj_map = Vec::new();
    for x in 0..src_a.num_objects() {
        for y in 0..src_b.num_objects() {
            obj_map.push(obj_index(f.obj_map[x], g.obj_map[y]));
        }
    }
    let mut mor_map = Vec::new();
    for p in 0..src_a.basis.len() {
        for q in 0..src_b.basis.len() {
            mor_map.push(pair(&f.mor_map[p], &g.mor_map[q]));
        }
    }
    let mut conn = Vec::new();
    for x in 0..src_a.num_objects() {
        for y in 0..src_b.num_objects() {
            let mut c = pair(&f.conn[x], &dst_b.identity(g.obj_map[y]));
            linvec_axpy(
                &mut c,
                &dst_a.field.one(),
                &pair(&dst_a.identity(f.obj_map[x]), &g.conn[y]),
            );
            conn.push(c);
        }
    }
    CdgFunctor {
        obj_map,
        mor_map,
        conn,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;

    #[test]
    fn identity_is_cdg() {
        for seed in 0..10 {
            let cat = sample::random_category(seed);
            let id = CdgFunctor::identity(&cat);
            assert!(id.validate(&cat, &cat).ok());
            assert!(id.is_cdg(&cat, &cat));
        }
    }

    #[test]
    fn twist_functor_is_cdg() {
        for seed in 0..20 {
            let cat = sample::random_category(seed);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xbeef);
            let tau = sample::random_tau(&cat, &mut rng);
            let twisted = cat.change_connection(&tau).unwrap();
            let f = CdgFunctor::twist(&twisted, &tau);
            let report = f.validate(&twisted, &cat);
            assert!(report.ok(), "seed {seed}: {:?}", report.failures);
            assert!(f.is_cdg(&twisted, &cat), "seed {seed}");
        }
    }

    #[test]
    fn opposite_and_tensor_of_twist_are_cdg() {
        for seed in 0..10 {
            let cat = sample::random_category(seed);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x17);
            let tau = sample::random_tau(&cat, &mut rng);
            let twisted = cat.change_connection(&tau).unwrap();
            let f = CdgFunctor::twist(&twisted, &tau);
            let fop = opposite_functor(&f, &cat.opposite());
            let rep = fop.validate(&twisted.opposite(), &cat.opposite());
            assert!(rep.ok(), "seed {seed}: {:?}", rep.failures);
            assert!(fop.is_cdg(&twisted.opposite(), &cat.opposite()));

            let src_e = twisted.tensor(&twisted.opposite()).unwrap();
            let dst_e = cat.tensor(&cat.opposite()).unwrap();
            let ff = tensor_functor(
                &f,
                &fop,
                &twisted,
                &twisted.opposite(),
                &cat,
                &cat.opposite(),
            );
            let rep = ff.validate(&src_e, &dst_e);
            assert!(rep.ok(), "seed {seed}: {:?}", rep.failures);
            assert!(ff.is_cdg(&src_e, &dst_e), "seed {seed}");
        }
    }

    #[test]
    fn composite_of_twists() {
        let cat = sample::exterior(crate::scalar::Field::Q, crate::grading::GradingGroup::Int);
        let tau = vec![vec![(1, crate::scalar::Field::Q.one())]];
        let t1 = cat.change_connection(&tau).unwrap();
        let f = CdgFunctor::twist(&t1, &tau);
        let tau2 = vec![vec![(1, crate::scalar::Field::Q.from_i64(2))]];
        let t2 = t1.change_connection(&tau2).unwrap();
        let g = CdgFunctor::twist(&t2, &tau2);
        let gf = g.compose(&t1, &f).unwrap();
        assert!(gf.validate(&t2, &cat).ok());
        assert!(gf.is_cdg(&t2, &cat));
    }
}
