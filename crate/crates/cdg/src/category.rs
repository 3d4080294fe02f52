//! Small CDG-categories presented by a finite morphism basis.
//!
//! A CDG-category here is a `k`-linear category with finitely many objects
//! and finite-dimensional hom spaces, an odd derivation `d` of degree `one`,
//! and a curvature endomorphism `h_X` of degree `2 * one` on each object,
//! subject to
//!
//! ```text
//! d(f g) = d(f) g + (-1)^{|f|} f d(g)
//! d^2(f) = h_Y f - f h_X          for f: X -> Y
//! d(h_X) = 0
//! ```
//!
//! Morphisms are sparse linear combinations (`LinVec`) over the global basis.

use std::collections::HashMap;

use crate::error::{CdgError, Result};
use crate::grading::{Degree, GradingGroup, GradingMorphism};
use crate::matrix::{linvec_axpy, linvec_normalize, linvec_scale, LinVec, SparseMatrix};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct BasisMor {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    pub degree: Degree,
}

/// A finite CDG-category.  The structure tables are total: composition of a
/// non-composable basis pair is an error, a composable pair absent from the
/// table composes to zero.
#[derive(Clone, Debug)]
pub struct CdgCategory {
    pub field: Field,
    pub grading: GradingGroup,
    pub objects: Vec<String>,
    pub basis: Vec<BasisMor>,
    /// `(f, g) -> f . g` for basis indices with `basis[g].dst == basis[f].src`.
    pub compose: HashMap<(usize, usize), LinVec>,
    /// Identity morphism of each object.
    pub unit: Vec<LinVec>,
    /// `diff[f] = d(basis[f])`.
    pub diff: Vec<LinVec>,
    /// `curvature[X] = h_X`.
    pub curvature: Vec<LinVec>,
}

impl CdgCategory {
    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn degree(&self, f: usize) -> Degree {
        self.basis[f].degree
    }

    pub fn basis_in_hom(&self, src: usize, dst: usize) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis[i].src == src && self.basis[i].dst == dst)
            .collect()
    }

    pub fn hom_dim(&self, src: usize, dst: usize) -> usize {
        self.basis_in_hom(src, dst).len()
    }

    /// Compose two basis morphisms; `None` if not composable.
    pub fn compose_basis(&self, f: usize, g: usize) -> Option<LinVec> {
        if self.basis[g].dst != self.basis[f].src {
            return None;
        }
        Some(self.compose.get(&(f, g)).cloned().unwrap_or_default())
    }

    /// Bilinear composition `f . g` of morphism elements.  Terms that pair a
    /// non-composable basis couple are dropped, so callers must keep elements
    /// inside a single hom space when that matters; the structured operations
    /// in this crate always do.
    pub fn compose_elts(&self, f: &LinVec, g: &LinVec) -> LinVec {
        let mut acc: LinVec = Vec::new();
        for (fi, fc) in f {
            for (gi, gc) in g {
                if let Some(fg) = self.compose_basis(*fi, *gi) {
                    linvec_axpy(&mut acc, &fc.mul(gc), &fg);
                }
            }
        }
        acc
    }

    pub fn diff_elt(&self, f: &LinVec) -> LinVec {
        let mut acc: LinVec = Vec::new();
        for (fi, fc) in f {
            linvec_axpy(&mut acc, fc, &self.diff[*fi]);
        }
        acc
    }

    pub fn identity(&self, x: usize) -> LinVec {
        self.unit[x].clone()
    }

    pub fn curvature_of(&self, x: usize) -> LinVec {
        self.curvature[x].clone()
    }

    /// Whether every curvature element is zero.
    pub fn is_uncurved(&self) -> bool {
        self.curvature.iter().all(|h| h.is_empty())
    }

    /// Whether the differential is identically zero.
    pub fn has_zero_diff(&self) -> bool {
        self.diff.iter().all(|d| d.is_empty())
    }

    /// Degree of a homogeneous element; `None` for 0 or mixed degrees.
    pub fn elt_degree(&self, f: &LinVec) -> Option<Degree> {
        let mut deg = None;
        for (i, _) in f {
            let d = self.degree(*i);
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                Some(_) => return None,
            }
        }
        deg
    }

    fn fmt_elt(&self, f: &LinVec) -> String {
        if f.is_empty() {
            return "0".into();
        }
        f.iter()
            .map(|(i, c)| format!("{} * {}", c, self.basis[*i].name))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Exhaustive structural validation; every failure carries a witness.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let n = self.basis.len();
        let two = self
            .grading
            .add(self.grading.one(), self.grading.one());

        for (i, m) in self.basis.iter().enumerate() {
            if m.src >= self.num_objects() || m.dst >= self.num_objects() {
                failures.push(format!("basis morphism {} has out-of-range endpoints", m.name));
            }
            if self.grading.canon(m.degree.0) != m.degree {
                failures.push(format!(
                    "basis morphism {} has non-canonical degree {}",
                    m.name, m.degree
                ));
            }
            let _ = i;
        }
        if !failures.is_empty() {
            return ValidationReport { failures };
        }

        // composition table: closure, degrees, endpoints
        for (&(f, g), fg) in &self.compose {
            if f >= n || g >= n {
                failures.push(format!("compose table entry ({f}, {g}) out of range"));
                continue;
            }
            if self.basis[g].dst != self.basis[f].src {
                failures.push(format!(
                    "compose table pairs non-composable {} . {}",
                    self.basis[f].name, self.basis[g].name
                ));
                continue;
            }
            let deg = self.grading.add(self.degree(f), self.degree(g));
            for (i, _) in fg {
                let m = &self.basis[*i];
                if m.src != self.basis[g].src || m.dst != self.basis[f].dst {
                    failures.push(format!(
                        "{} . {} lands outside Hom({}, {})",
                        self.basis[f].name,
                        self.basis[g].name,
                        self.objects[self.basis[g].src],
                        self.objects[self.basis[f].dst]
                    ));
                }
                if m.degree != deg {
                    failures.push(format!(
                        "{} . {} is not homogeneous of degree {}: contains {}",
                        self.basis[f].name, self.basis[g].name, deg, m.name
                    ));
                }
            }
        }

        // units
        for x in 0..self.num_objects() {
            let e = &self.unit[x];
            if self.elt_degree(e).map_or(e.is_empty(), |d| d != self.grading.zero()) {
                failures.push(format!("unit of {} is not of degree 0", self.objects[x]));
            }
            for (i, _) in e {
                let m = &self.basis[*i];
                if m.src != x || m.dst != x {
                    failures.push(format!(
                        "unit of {} contains non-endomorphism {}",
                        self.objects[x], m.name
                    ));
                }
            }
        }
        for f in 0..n {
            let m = &self.basis[f];
            let fe = self.compose_elts(&vec![(f, self.field.one())], &self.unit[m.src]);
            if fe != vec![(f, self.field.one())] {
                failures.push(format!(
                    "unit law fails: {} . id_{} = {}",
                    m.name,
                    self.objects[m.src],
                    self.fmt_elt(&fe)
                ));
            }
            let ef = self.compose_elts(&self.unit[m.dst], &vec![(f, self.field.one())]);
            if ef != vec![(f, self.field.one())] {
                failures.push(format!(
                    "unit law fails: id_{} . {} = {}",
                    self.objects[m.dst],
                    m.name,
                    self.fmt_elt(&ef)
                ));
            }
        }

        // associativity on composable basis triples
        for f in 0..n {
            for g in 0..n {
                if self.basis[g].dst != self.basis[f].src {
                    continue;
                }
                for h in 0..n {
                    if self.basis[h].dst != self.basis[g].src {
                        continue;
                    }
                    let fg = self.compose_basis(f, g).unwrap();
                    let gh = self.compose_basis(g, h).unwrap();
                    let lhs = self.compose_elts(&fg, &vec![(h, self.field.one())]);
                    let rhs = self.compose_elts(&vec![(f, self.field.one())], &gh);
                    if lhs != rhs {
                        failures.push(format!(
                            "associativity fails on ({}, {}, {}): ({}) vs ({})",
                            self.basis[f].name,
                            self.basis[g].name,
                            self.basis[h].name,
                            self.fmt_elt(&lhs),
                            self.fmt_elt(&rhs)
                        ));
                    }
                }
            }
        }

        // differential: endpoints, degree one, Leibniz
        for f in 0..n {
            let m = &self.basis[f];
            let expect = self.grading.add(m.degree, self.grading.one());
            for (i, _) in &self.diff[f] {
                let t = &self.basis[*i];
                if t.src != m.src || t.dst != m.dst {
                    failures.push(format!("d({}) leaves its hom space", m.name));
                }
                if t.degree != expect {
                    failures.push(format!(
                        "d({}) has a component {} of degree {}, expected {}",
                        m.name, t.name, t.degree, expect
                    ));
                }
            }
        }
        for f in 0..n {
            for g in 0..n {
                if self.basis[g].dst != self.basis[f].src {
                    continue;
                }
                let fe = vec![(f, self.field.one())];
                let ge = vec![(g, self.field.one())];
                let lhs = self.diff_elt(&self.compose_basis(f, g).unwrap());
                let sign = self.grading.koszul_sign(self.degree(f), self.grading.one());
                let mut rhs = self.compose_elts(&self.diff[f], &ge);
                let term = self.compose_elts(&fe, &self.diff[g]);
                linvec_axpy(&mut rhs, &self.field.one().signed(sign), &term);
                if lhs != rhs {
                    failures.push(format!(
                        "Leibniz fails on ({}, {}): d(fg) = {}, expansion = {}",
                        self.basis[f].name,
                        self.basis[g].name,
                        self.fmt_elt(&lhs),
                        self.fmt_elt(&rhs)
                    ));
                }
            }
        }

        // curvature: degree 2, endomorphism, d^2 = [h, -], d(h) = 0
        for x in 0..self.num_objects() {
            let h = &self.curvature[x];
            for (i, _) in h {
                let m = &self.basis[*i];
                if m.src != x || m.dst != x {
                    failures.push(format!(
                        "curvature of {} contains non-endomorphism {}",
                        self.objects[x], m.name
                    ));
                }
                if m.degree != two {
                    failures.push(format!(
                        "curvature of {} has a component of degree {}, expected {}",
                        self.objects[x], m.degree, two
                    ));
                }
            }
            let dh = self.diff_elt(h);
            if !dh.is_empty() {
                failures.push(format!(
                    "d(h_{}) = {} is nonzero",
                    self.objects[x],
                    self.fmt_elt(&dh)
                ));
            }
        }
        for f in 0..n {
            let m = &self.basis[f];
            let fe = vec![(f, self.field.one())];
            let lhs = self.diff_elt(&self.diff[f]);
            let mut rhs = self.compose_elts(&self.curvature[m.dst], &fe);
            let term = self.compose_elts(&fe, &self.curvature[m.src]);
            linvec_axpy(&mut rhs, &self.field.one().neg(), &term);
            if lhs != rhs {
                failures.push(format!(
                    "d^2 law fails on {}: d^2 = {}, h f - f h = {}",
                    m.name,
                    self.fmt_elt(&lhs),
                    self.fmt_elt(&rhs)
                ));
            }
        }

        ValidationReport { failures }
    }

    /// The opposite CDG-category: endpoints swap,
    /// `f^op . g^op = (-1)^{|f||g|} (g . f)^op`, `h_{X^op} = -h_X`.
    pub fn opposite(&self) -> CdgCategory {
        let basis = self
            .basis
            .iter()
            .map(|m| BasisMor {
                name: m.name.clone(),
                src: m.dst,
                dst: m.src,
                degree: m.degree,
            })
            .collect();
        let mut compose = HashMap::new();
        for (&(f, g), fg) in &self.compose {
            let sign = self.grading.koszul_sign(self.degree(f), self.degree(g));
            let v = linvec_scale(fg, &self.field.one().signed(sign));
            if !v.is_empty() {
                compose.insert((g, f), v);
            }
        }
        CdgCategory {
            field: self.field,
            grading: self.grading,
            objects: self.objects.clone(),
            basis,
            compose,
            unit: self.unit.clone(),
            diff: self.diff.clone(),
            curvature: self
                .curvature
                .iter()
                .map(|h| linvec_scale(h, &self.field.one().neg()))
                .collect(),
        }
    }

    /// Tensor product of CDG-categories over the ground field.  Objects are
    /// pairs, hom bases are pairs, and
    ///
    /// ```text
    /// (f' ⊗ f'')(g' ⊗ g'') = (-1)^{σ(|f''|, |g'|)} (f' g') ⊗ (f'' g'')
    /// d(f' ⊗ f'') = d(f') ⊗ f'' + (-1)^{|f'|} f' ⊗ d(f'')
    /// h_{(X', X'')} = h_{X'} ⊗ id + id ⊗ h_{X''}
    /// ```
    pub fn tensor(&self, other: &CdgCategory) -> Result<CdgCategory> {
        if self.field != other.field {
            return Err(CdgError::FieldMismatch(format!(
                "{} vs {}",
                self.field.name(),
                other.field.name()
            )));
        }
        if self.grading != other.grading {
            return Err(CdgError::Grading(format!(
                "cannot tensor {} and {} graded categories",
                self.grading.name(),
                other.grading.name()
            )));
        }
        let n2 = other.num_objects();
        let b2 = other.basis.len();
        let obj_index = |x1: usize, x2: usize| x1 * n2 + x2;
        let mor_index = |f1: usize, f2: usize| f1 * b2 + f2;

        let mut objects = Vec::new();
        for o1 in &self.objects {
            for o2 in &other.objects {
                objects.push(format!("({o1}, {o2})"));
            }
        }
        let mut basis = Vec::new();
        for (f1, m1) in self.basis.iter().enumerate() {
            for (f2, m2) in other.basis.iter().enumerate() {
                let _ = (f1, f2);
                basis.push(BasisMor {
                    name: format!("{} ⊗ {}", m1.name, m2.name),
                    src: obj_index(m1.src, m2.src),
                    dst: obj_index(m1.dst, m2.dst),
                    degree: self.grading.add(m1.degree, m2.degree),
                });
            }
        }
        // pair two element vectors into the product basis
        let pair = |v1: &LinVec, v2: &LinVec| -> LinVec {
            let mut out = Vec::new();
            for (i1, c1) in v1 {
                for (i2, c2) in v2 {
                    out.push((mor_index(*i1, *i2), c1.mul(c2)));
                }
            }
            linvec_normalize(out)
        };

        let mut compose = HashMap::new();
        for f1 in 0..self.basis.len() {
            for f2 in 0..other.basis.len() {
                for g1 in 0..self.basis.len() {
                    if self.basis[g1].dst != self.basis[f1].src {
                        continue;
                    }
                    for g2 in 0..other.basis.len() {
                        if other.basis[g2].dst != other.basis[f2].src {
                            continue;
                        }
                        let c1 = self.compose_basis(f1, g1).unwrap();
                        let c2 = other.compose_basis(f2, g2).unwrap();
                        let sign = self
                            .grading
                            .koszul_sign(other.degree(f2), self.degree(g1));
                        let v = linvec_scale(&pair(&c1, &c2), &self.field.one().signed(sign));
                        if !v.is_empty() {
                            compose.insert((mor_index(f1, f2), mor_index(g1, g2)), v);
                        }
                    }
                }
            }
        }

        let mut unit = Vec::new();
        let mut curvature = Vec::new();
        for x1 in 0..self.num_objects() {
            for x2 in 0..n2 {
                unit.push(pair(&self.unit[x1], &other.unit[x2]));
                let mut h = pair(&self.curvature[x1], &other.unit[x2]);
                linvec_axpy(
                    &mut h,
                    &self.field.one(),
                    &pair(&self.unit[x1], &other.curvature[x2]),
                );
                curvature.push(h);
            }
        }

        let mut diff = Vec::new();
        for (f1, m1) in self.basis.iter().enumerate() {
            for f2 in 0..other.basis.len() {
                let mut v = pair(&self.diff[f1], &vec![(f2, other.field.one())]);
                let sign = self.grading.koszul_sign(m1.degree, self.grading.one());
                linvec_axpy(
                    &mut v,
                    &self.field.one().signed(sign),
                    &pair(&vec![(f1, self.field.one())], &other.diff[f2]),
                );
                diff.push(v);
            }
        }

        Ok(CdgCategory {
            field: self.field,
            grading: self.grading,
            objects,
            basis,
            compose,
            unit,
            diff,
            curvature,
        })
    }

    /// Change of connection by odd endomorphisms `tau[X]`:
    ///
    /// ```text
    /// d'(f) = d(f) + τ_Y f - (-1)^{|f|} f τ_X
    /// h'_X  = h_X + d(τ_X) + τ_X^2
    /// ```
    ///
    /// The result is a CDG-category on the same underlying graded category.
    pub fn change_connection(&self, tau: &[LinVec]) -> Result<CdgCategory> {
        if tau.len() != self.num_objects() {
            return Err(CdgError::Dimension(
                "one connection term per object required".into(),
            ));
        }
        for (x, t) in tau.iter().enumerate() {
            for (i, _) in t {
                let m = &self.basis[*i];
                if m.src != x || m.dst != x {
                    return Err(CdgError::Invalid(format!(
                        "connection term of {} contains non-endomorphism {}",
                        self.objects[x], m.name
                    )));
                }
                if m.degree != self.grading.one() {
                    return Err(CdgError::Invalid(format!(
                        "connection term of {} is not of degree one",
                        self.objects[x]
                    )));
                }
            }
        }
        let mut diff = Vec::new();
        for (f, m) in self.basis.iter().enumerate() {
            let fe = vec![(f, self.field.one())];
            let mut v = self.diff[f].clone();
            linvec_axpy(&mut v, &self.field.one(), &self.compose_elts(&tau[m.dst], &fe));
            let sign = self.grading.koszul_sign(m.degree, self.grading.one());
            linvec_axpy(
                &mut v,
                &self.field.one().signed(sign).neg(),
                &self.compose_elts(&fe, &tau[m.src]),
            );
            diff.push(v);
        }
        let mut curvature = Vec::new();
        for x in 0..self.num_objects() {
            let mut h = self.curvature[x].clone();
            linvec_axpy(&mut h, &self.field.one(), &self.diff_elt(&tau[x]));
            linvec_axpy(
                &mut h,
                &self.field.one(),
                &self.compose_elts(&tau[x], &tau[x]),
            );
            curvature.push(h);
        }
        Ok(CdgCategory {
            diff,
            curvature,
            ..self.clone()
        })
    }

    /// Shift every curvature by `c * id`.  The identity has degree 0 and the
    /// curvature degree `2 * one`, so a nonzero shift needs `2 * one = 0`,
    /// which holds only for the `Z/2` grading.
    pub fn curvature_shift(&self, c: &Scalar) -> Result<CdgCategory> {
        let two = self.grading.add(self.grading.one(), self.grading.one());
        if !c.is_zero() && two != self.grading.zero() {
            return Err(CdgError::Grading(
                "curvature shift by a scalar needs 2 * one = 0 in the grading group".into(),
            ));
        }
        let mut curvature = Vec::new();
        for x in 0..self.num_objects() {
            let mut h = self.curvature[x].clone();
            linvec_axpy(&mut h, c, &self.unit[x]);
            curvature.push(h);
        }
        Ok(CdgCategory {
            curvature,
            ..self.clone()
        })
    }

    /// Push the grading forward along a grading morphism (e.g. `Z -> Z/2`).
    pub fn pushforward(&self, phi: &GradingMorphism) -> Result<CdgCategory> {
        if phi.source != self.grading {
            return Err(CdgError::Grading(format!(
                "category is {}-graded, morphism starts at {}",
                self.grading.name(),
                phi.source.name()
            )));
        }
        let basis = self
            .basis
            .iter()
            .map(|m| BasisMor {
                degree: phi.apply(m.degree),
                ..m.clone()
            })
            .collect();
        Ok(CdgCategory {
            grading: phi.target,
            basis,
            ..self.clone()
        })
    }

    /// Infer units by solving the two-sided identity equations in each
    /// degree-0 endomorphism space.  Fails if no (unique) solution exists.
    pub fn infer_units(
        field: Field,
        grading: GradingGroup,
        objects: &[String],
        basis: &[BasisMor],
        compose: &HashMap<(usize, usize), LinVec>,
    ) -> Result<Vec<LinVec>> {
        let n = basis.len();
        let mut unit = Vec::new();
        for x in 0..objects.len() {
            let candidates: Vec<usize> = (0..n)
                .filter(|&i| {
                    basis[i].src == x && basis[i].dst == x && basis[i].degree == grading.zero()
                })
                .collect();
            // unknowns: coefficients of candidates; equations: e . g = g and
            // f . e = f, coordinatewise in the global basis
            let mut equations: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
            for g in 0..n {
                if basis[g].dst != x {
                    continue;
                }
                // e . g = g, coordinatewise over all basis indices
                let mut products: Vec<LinVec> = Vec::new();
                for &c in &candidates {
                    products.push(compose.get(&(c, g)).cloned().unwrap_or_default());
                }
                let coords: std::collections::BTreeSet<usize> = products
                    .iter()
                    .flatten()
                    .map(|(i, _)| *i)
                    .chain(std::iter::once(g))
                    .collect();
                for coord in coords {
                    let row: Vec<Scalar> = products
                        .iter()
                        .map(|p| {
                            crate::matrix::linvec_get(p, coord)
                                .cloned()
                                .unwrap_or_else(|| field.zero())
                        })
                        .collect();
                    let b = if coord == g { field.one() } else { field.zero() };
                    equations.push((row, b));
                }
            }
            for f in 0..n {
                if basis[f].src != x {
                    continue;
                }
                let mut products: Vec<LinVec> = Vec::new();
                for &c in &candidates {
                    products.push(compose.get(&(f, c)).cloned().unwrap_or_default());
                }
                let coords: std::collections::BTreeSet<usize> = products
                    .iter()
                    .flatten()
                    .map(|(i, _)| *i)
                    .chain(std::iter::once(f))
                    .collect();
                for coord in coords {
                    let row: Vec<Scalar> = products
                        .iter()
                        .map(|p| {
                            crate::matrix::linvec_get(p, coord)
                                .cloned()
                                .unwrap_or_else(|| field.zero())
                        })
                        .collect();
                    let b = if coord == f { field.one() } else { field.zero() };
                    equations.push((row, b));
                }
            }
            let mut triplets = Vec::new();
            let mut rhs: LinVec = Vec::new();
            for (r, (row, b)) in equations.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        triplets.push((r, c, v.clone()));
                    }
                }
                if !b.is_zero() {
                    rhs.push((r, b.clone()));
                }
            }
            let m = SparseMatrix::from_triplets(equations.len(), candidates.len(), triplets)?;
            let sol = m.solve(&linvec_normalize(rhs)).ok_or_else(|| {
                CdgError::Invalid(format!("object {} has no identity morphism", objects[x]))
            })?;
            let mut e: LinVec = sol
                .into_iter()
                .map(|(pos, c)| (candidates[pos], c))
                .collect();
            e.sort_by_key(|&(i, _)| i);
            unit.push(e);
        }
        Ok(unit)
    }

    /// The full subcategory on a subset of objects, reindexing the basis.
    pub fn full_subcategory(&self, keep: &[usize]) -> CdgCategory {
        let obj_map: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mor_keep: Vec<usize> = (0..self.basis.len())
            .filter(|&i| {
                obj_map.contains_key(&self.basis[i].src) && obj_map.contains_key(&self.basis[i].dst)
            })
            .collect();
        let mor_map: HashMap<usize, usize> =
            mor_keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let remap = |v: &LinVec| -> LinVec {
            v.iter()
                .filter_map(|(i, c)| mor_map.get(i).map(|&j| (j, c.clone())))
                .collect()
        };
        let basis = mor_keep
            .iter()
            .map(|&i| BasisMor {
                name: self.basis[i].name.clone(),
                src: obj_map[&self.basis[i].src],
                dst: obj_map[&self.basis[i].dst],
                degree: self.basis[i].degree,
            })
            .collect();
        let mut compose = HashMap::new();
        for (&(f, g), fg) in &self.compose {
            if let (Some(&f2), Some(&g2)) = (mor_map.get(&f), mor_map.get(&g)) {
                let v = remap(fg);
                if !v.is_empty() {
                    compose.insert((f2, g2), v);
                }
            }
        }
        CdgCategory {
            field: self.field,
            grading: self.grading,
            objects: keep.iter().map(|&x| self.objects[x].clone()).collect(),
            basis,
            compose,
            unit: keep.iter().map(|&x| remap(&self.unit[x])).collect(),
            diff: mor_keep.iter().map(|&i| remap(&self.diff[i])).collect(),
            curvature: keep.iter().map(|&x| remap(&self.curvature[x])).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}
