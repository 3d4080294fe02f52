//! CDG- and QDG-modules over a finite CDG-category, with the module-level
//! constructions: twists, shifts, free CDG-modules, representables, Hom and
//! tensor complexes, cones, the matrix-factorization category builder, and
//! the diagonal bimodules.
//!
//! Modules do not own their base category; every operation takes it
//! explicitly.  A module is a finite graded space with a basis labelled by
//! objects, an action table, and a degree-`one` differential:
//!
//! ```text
//! left:   d(f . m) = d(f) . m + (-1)^{|f|} f . d(m),   d^2(m) = h . m
//! right:  d(m . f) = d(m) . f + (-1)^{|m|} m . d(f),   d^2(m) = -m . h
//! ```
//!
//! The right-hand `d^2` sign comes from `h_{X^op} = -h_X`.  Dropping the
//! `d^2` law gives a QDG-module, whose failure is the module curvature.

use std::collections::HashMap;

use crate::category::{CdgCategory, ValidationReport};
use crate::complex::{quotient_by_span_in, FiniteComplex, QuotientMap};
use crate::error::{CdgError, Result};
use crate::grading::Degree;
use crate::matrix::{
    kernel_basis_with_field, linvec_axpy, linvec_get, linvec_normalize, linvec_scale, LinVec,
    SparseMatrix,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModBasis {
    pub name: String,
    pub object: usize,
    pub degree: Degree,
}

/// A presentation of the underlying graded module as a direct summand of an
/// explicit free graded module: `pi . iota = id`.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// Free generators: (object, degree shift).
    pub generators: Vec<(usize, Degree)>,
    /// `iota[m]`: image of the m-th module basis vector in the free basis.
    pub iota: Vec<LinVec>,
    /// `pi[q]`: image of the q-th free basis vector back in the module.
    pub pi: Vec<LinVec>,
}

#[derive(Clone, Debug)]
pub struct CdgModule {
    pub side: Side,
    pub basis: Vec<ModBasis>,
    /// `(f, m) -> f . m` (left) or `m . f` (right); composability is
    /// `object(m) == src(f)` (left) / `object(m) == dst(f)` (right).
    pub action: HashMap<(usize, usize), LinVec>,
    /// `diff[m] = d(m)`.
    pub diff: Vec<LinVec>,
    pub presentation: Option<Presentation>,
}

impl CdgModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn zero(side: Side) -> CdgModule {
        CdgModule {
            side,
            basis: Vec::new(),
            action: HashMap::new(),
            diff: Vec::new(),
            presentation: None,
        }
    }

    fn composable(&self, cat: &CdgCategory, f: usize, m: usize) -> bool {
        let obj = self.basis[m].object;
        match self.side {
            Side::Left => cat.basis[f].src == obj,
            Side::Right => cat.basis[f].dst == obj,
        }
    }

    fn result_object(&self, cat: &CdgCategory, f: usize) -> usize {
        match self.side {
            Side::Left => cat.basis[f].dst,
            Side::Right => cat.basis[f].src,
        }
    }

    pub fn act_basis(&self, cat: &CdgCategory, f: usize, m: usize) -> Option<LinVec> {
        if !self.composable(cat, f, m) {
            return None;
        }
        Some(self.action.get(&(f, m)).cloned().unwrap_or_default())
    }

    /// Bilinear action: `f . m` for left modules, `m . f` for right ones.
    pub fn act(&self, cat: &CdgCategory, f: &LinVec, m: &LinVec) -> LinVec {
        let mut acc: LinVec = Vec::new();
        for (fi, fc) in f {
            for (mi, mc) in m {
                if let Some(v) = self.act_basis(cat, *fi, *mi) {
                    linvec_axpy(&mut acc, &fc.mul(mc), &v);
                }
            }
        }
        acc
    }

    pub fn diff_elt(&self, m: &LinVec) -> LinVec {
        let mut acc: LinVec = Vec::new();
        for (mi, mc) in m {
            linvec_axpy(&mut acc, mc, &self.diff[*mi]);
        }
        acc
    }

    /// Curvature action on a basis element: `h . m` (left) or `-m . h`
    /// (right); this is what `d^2` must equal for a CDG-module.
    pub fn curvature_action(&self, cat: &CdgCategory, m: usize) -> LinVec {
        let h = cat.curvature_of(self.basis[m].object);
        let me = vec![(m, cat.field.one())];
        match self.side {
            Side::Left => self.act(cat, &h, &me),
            Side::Right => linvec_scale(&self.act(cat, &h, &me), &cat.field.one().neg()),
        }
    }

    pub fn elt_degree(&self, m: &LinVec) -> Option<Degree> {
        let mut deg = None;
        for (i, _) in m {
            let d = self.basis[*i].degree;
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                Some(_) => return None,
            }
        }
        deg
    }

    fn fmt_elt(&self, m: &LinVec) -> String {
        if m.is_empty() {
            return "0".into();
        }
        m.iter()
            .map(|(i, c)| format!("{} * {}", c, self.basis[*i].name))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Structural validation.  `strict` additionally enforces the `d^2` law
    /// (CDG); without it the data is validated as a QDG-module.
    pub fn validate(&self, cat: &CdgCategory, strict: bool) -> ValidationReport {
        let mut failures = Vec::new();
        let n = self.dim();
        for m in &self.basis {
            if m.object >= cat.num_objects() {
                failures.push(format!("module element {} lies over no object", m.name));
            }
            if cat.grading.canon(m.degree.0) != m.degree {
                failures.push(format!("module element {} has non-canonical degree", m.name));
            }
        }
        if !failures.is_empty() {
            return ValidationReport { failures };
        }
        if self.diff.len() != n {
            failures.push("differential table has wrong length".into());
            return ValidationReport { failures };
        }

        // action table: composability, object and degree of results
        for (&(f, m), v) in &self.action {
            if f >= cat.basis.len() || m >= n {
                failures.push(format!("action entry ({f}, {m}) out of range"));
                continue;
            }
            if !self.composable(cat, f, m) {
                failures.push(format!(
                    "action pairs non-composable ({}, {})",
                    cat.basis[f].name, self.basis[m].name
                ));
                continue;
            }
            let obj = self.result_object(cat, f);
            let deg = cat.grading.add(cat.degree(f), self.basis[m].degree);
            for (i, _) in v {
                if self.basis[*i].object != obj || self.basis[*i].degree != deg {
                    failures.push(format!(
                        "action of {} on {} has a bad component {}",
                        cat.basis[f].name, self.basis[m].name, self.basis[*i].name
                    ));
                }
            }
        }

        // unitality
        for m in 0..n {
            let e = cat.identity(self.basis[m].object);
            let me = vec![(m, cat.field.one())];
            let em = self.act(cat, &e, &me);
            if em != me {
                failures.push(format!(
                    "unit acts on {} as {}",
                    self.basis[m].name,
                    self.fmt_elt(&em)
                ));
            }
        }

        // associativity: (fg) acting equals the iterated action in the
        // side-appropriate order
        for f in 0..cat.basis.len() {
            for g in 0..cat.basis.len() {
                let Some(fg) = cat.compose_basis(f, g) else { continue };
                for m in 0..n {
                    let me = vec![(m, cat.field.one())];
                    let (lhs, rhs) = match self.side {
                        Side::Left => {
                            // (fg) . m = f . (g . m); needs src(g) = object
                            if cat.basis[g].src != self.basis[m].object {
                                continue;
                            }
                            let gm = self.act(cat, &vec![(g, cat.field.one())], &me);
                            (
                                self.act(cat, &fg, &me),
                                self.act(cat, &vec![(f, cat.field.one())], &gm),
                            )
                        }
                        Side::Right => {
                            // m . (fg) = (m . f) . g; needs dst(f) = object
                            if cat.basis[f].dst != self.basis[m].object {
                                continue;
                            }
                            let mf = self.act(cat, &vec![(f, cat.field.one())], &me);
                            (
                                self.act(cat, &fg, &me),
                                self.act(cat, &vec![(g, cat.field.one())], &mf),
                            )
                        }
                    };
                    if lhs != rhs {
                        failures.push(format!(
                            "associativity fails on ({}, {}, {}): {} vs {}",
                            cat.basis[f].name,
                            cat.basis[g].name,
                            self.basis[m].name,
                            self.fmt_elt(&lhs),
                            self.fmt_elt(&rhs)
                        ));
                    }
                }
            }
        }

        // differential: degree and endpoints
        for m in 0..n {
            let expect = cat.grading.add(self.basis[m].degree, cat.grading.one());
            for (i, _) in &self.diff[m] {
                if self.basis[*i].object != self.basis[m].object
                    || self.basis[*i].degree != expect
                {
                    failures.push(format!(
                        "d({}) has a bad component {}",
                        self.basis[m].name, self.basis[*i].name
                    ));
                }
            }
        }

        // Leibniz
        for f in 0..cat.basis.len() {
            for m in 0..n {
                if !self.composable(cat, f, m) {
                    continue;
                }
                let fe = vec![(f, cat.field.one())];
                let me = vec![(m, cat.field.one())];
                let lhs = self.diff_elt(&self.act(cat, &fe, &me));
                let mut rhs;
                match self.side {
                    Side::Left => {
                        rhs = self.act(cat, &cat.diff[f], &me);
                        let sign = cat.grading.koszul_sign(cat.degree(f), cat.grading.one());
                        linvec_axpy(
                            &mut rhs,
                            &cat.field.one().signed(sign),
                            &self.act(cat, &fe, &self.diff[m]),
                        );
                    }
                    Side::Right => {
                        rhs = self.act(cat, &fe, &self.diff[m]);
                        let sign = cat
                            .grading
                            .koszul_sign(self.basis[m].degree, cat.grading.one());
                        linvec_axpy(
                            &mut rhs,
                            &cat.field.one().signed(sign),
                            &self.act(cat, &cat.diff[f], &me),
                        );
                    }
                }
                if lhs != rhs {
                    failures.push(format!(
                        "Leibniz fails on ({}, {}): {} vs {}",
                        cat.basis[f].name,
                        self.basis[m].name,
                        self.fmt_elt(&lhs),
                        self.fmt_elt(&rhs)
                    ));
                }
            }
        }

        if strict {
            for (m, c) in self.curvature(cat).iter().enumerate() {
                if !c.is_empty() {
                    failures.push(format!(
                        "d^2 law fails on {}: module curvature {}",
                        self.basis[m].name,
                        self.fmt_elt(c)
                    ));
                }
            }
        }

        if let Some(p) = &self.presentation {
            if let Err(e) = validate_presentation(cat, self, p) {
                failures.push(format!("presentation invalid: {e}"));
            }
        }

        ValidationReport { failures }
    }

    /// Module curvature `d^2 - (curvature action)` per basis element; zero
    /// exactly when the QDG-module is CDG.
    pub fn curvature(&self, cat: &CdgCategory) -> Vec<LinVec> {
        (0..self.dim())
            .map(|m| {
                let mut c = self.diff_elt(&self.diff[m]);
                linvec_axpy(
                    &mut c,
                    &cat.field.one().neg(),
                    &self.curvature_action(cat, m),
                );
                c
            })
            .collect()
    }

    pub fn is_cdg(&self, cat: &CdgCategory) -> bool {
        self.curvature(cat).iter().all(|c| c.is_empty())
    }

    /// Twist the differential by a degree-1 B-linear endomorphism:
    /// `d' = d + τ`.  Curvature changes by `dτ + τ^2`; the result is CDG
    /// exactly when τ satisfies the Maurer-Cartan equation relative to M.
    pub fn twist(&self, cat: &CdgCategory, tau: &ModuleMorphism) -> Result<CdgModule> {
        if tau.degree != cat.grading.one() {
            return Err(CdgError::Invalid("twist needs a degree-1 endomorphism".into()));
        }
        tau.check_linear(cat, self, self)?;
        let mut out = self.clone();
        for m in 0..self.dim() {
            linvec_axpy(&mut out.diff[m], &cat.field.one(), &tau.map[m]);
        }
        Ok(out)
    }

    /// Degree shift `M[n]`: degrees translate by `n`, `d' = (-1)^n d`, and
    /// for left modules the action picks up `koszul_sign(n, |f|)`; right
    /// actions are untouched.  This is one of the two consistent global
    /// conventions; it is fixed here once and for all.
    pub fn shift(&self, cat: &CdgCategory, n: Degree) -> CdgModule {
        let g = cat.grading;
        let basis = self
            .basis
            .iter()
            .map(|m| ModBasis {
                name: format!("{}[{}]", m.name, n),
                object: m.object,
                degree: g.add(m.degree, n),
            })
            .collect();
        let dsign = cat.field.one().signed(g.koszul_sign(n, g.one()));
        let diff = self.diff.iter().map(|v| linvec_scale(v, &dsign)).collect();
        let mut action = HashMap::new();
        for (&(f, m), v) in &self.action {
            let v = match self.side {
                Side::Left => {
                    let s = g.koszul_sign(n, cat.degree(f));
                    linvec_scale(v, &cat.field.one().signed(s))
                }
                Side::Right => v.clone(),
            };
            if !v.is_empty() {
                action.insert((f, m), v);
            }
        }
        let presentation = self.presentation.as_ref().map(|p| Presentation {
            generators: p
                .generators
                .iter()
                .map(|&(x, d)| (x, g.add(d, n)))
                .collect(),
            iota: p.iota.clone(),
            pi: p.pi.clone(),
        });
        CdgModule {
            side: self.side,
            basis,
            action,
            diff,
            presentation,
        }
    }
}

/// A homogeneous B-linear map between modules of the same side, given by
/// images of the source basis.  Linearity convention:
///
/// ```text
/// left:   φ(f . m) = (-1)^{σ(|φ|, |f|)} f . φ(m)
/// right:  φ(m . f) = φ(m) . f
/// ```
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    pub degree: Degree,
    pub map: Vec<LinVec>,
}

impl ModuleMorphism {
    pub fn identity(m: &CdgModule, cat: &CdgCategory) -> ModuleMorphism {
        ModuleMorphism {
            degree: cat.grading.zero(),
            map: (0..m.dim()).map(|i| vec![(i, cat.field.one())]).collect(),
        }
    }

    pub fn apply(&self, v: &LinVec) -> LinVec {
        let mut acc: LinVec = Vec::new();
        for (i, c) in v {
            linvec_axpy(&mut acc, c, &self.map[*i]);
        }
        acc
    }

    /// Check endpoints, homogeneity, and B-linearity.
    pub fn check_linear(
        &self,
        cat: &CdgCategory,
        src: &CdgModule,
        dst: &CdgModule,
    ) -> Result<()> {
        if src.side != dst.side {
            return Err(CdgError::Incompatible("mixed module sides".into()));
        }
        if self.map.len() != src.dim() {
            return Err(CdgError::Dimension("morphism table length".into()));
        }
        for (m, img) in self.map.iter().enumerate() {
            let deg = cat.grading.add(src.basis[m].degree, self.degree);
            for (i, _) in img {
                if dst.basis[*i].object != src.basis[m].object || dst.basis[*i].degree != deg {
                    return Err(CdgError::Invalid(format!(
                        "image of {} has a bad component {}",
                        src.basis[m].name, dst.basis[*i].name
                    )));
                }
            }
        }
        for f in 0..cat.basis.len() {
            for m in 0..src.dim() {
                if !src.composable(cat, f, m) {
                    continue;
                }
                let fe = vec![(f, cat.field.one())];
                let me = vec![(m, cat.field.one())];
                let lhs = self.apply(&src.act(cat, &fe, &me));
                let rhs = match src.side {
                    Side::Left => {
                        let s = cat.grading.koszul_sign(self.degree, cat.degree(f));
                        linvec_scale(
                            &dst.act(cat, &fe, &self.map[m]),
                            &cat.field.one().signed(s),
                        )
                    }
                    Side::Right => dst.act(cat, &fe, &self.map[m]),
                };
                if lhs != rhs {
                    return Err(CdgError::Invalid(format!(
                        "not B-linear at ({}, {})",
                        cat.basis[f].name, src.basis[m].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// The hom-complex differential `d(φ) = d_dst φ - (-1)^{|φ|} φ d_src`.
    pub fn differential(
        &self,
        cat: &CdgCategory,
        src: &CdgModule,
        dst: &CdgModule,
    ) -> ModuleMorphism {
        let sign = cat.grading.koszul_sign(self.degree, cat.grading.one());
        let map = (0..src.dim())
            .map(|m| {
                let mut v = dst.diff_elt(&self.map[m]);
                linvec_axpy(
                    &mut v,
                    &cat.field.one().signed(sign).neg(),
                    &self.apply(&src.diff[m]),
                );
                v
            })
            .collect();
        ModuleMorphism {
            degree: cat.grading.add(self.degree, cat.grading.one()),
            map,
        }
    }

    pub fn is_closed(&self, cat: &CdgCategory, src: &CdgModule, dst: &CdgModule) -> bool {
        self.differential(cat, src, dst).map.iter().all(|v| v.is_empty())
    }
}

pub fn validate_presentation(cat: &CdgCategory, m: &CdgModule, p: &Presentation) -> Result<()> {
    let free = free_graded_module(cat, m.side, &p.generators);
    if p.iota.len() != m.dim() || p.pi.len() != free.dim() {
        return Err(CdgError::Dimension("presentation table lengths".into()));
    }
    let iota = ModuleMorphism {
        degree: cat.grading.zero(),
        map: p.iota.clone(),
    };
    let pi = ModuleMorphism {
        degree: cat.grading.zero(),
        map: p.pi.clone(),
    };
    iota.check_linear(cat, m, &free)?;
    pi.check_linear(cat, &free, m)?;
    for i in 0..m.dim() {
        let round = pi.apply(&iota.map[i]);
        if round != vec![(i, cat.field.one())] {
            return Err(CdgError::Invalid(format!(
                "pi . iota is not the identity at {}",
                m.basis[i].name
            )));
        }
    }
    Ok(())
}

/// The free graded module on generators `(X_i, n_i)`, with zero differential
/// (a graded module over `B^#`, not yet a QDG-module).
///
/// Right: basis `(i, f)` over all `f` with `dst(f) = X_i`, lying over
/// `src(f)`; `(i, f) . g = (i, f g)`.  Left: `(i, f)` with `src(f) = X_i`
/// over `dst(f)`; `g . (i, f) = koszul_sign(n_i, |g|) (i, g f)`.
pub fn free_graded_module(
    cat: &CdgCategory,
    side: Side,
    generators: &[(usize, Degree)],
) -> CdgModule {
    let mut basis = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for (gi, &(x, n)) in generators.iter().enumerate() {
        for (fi, f) in cat.basis.iter().enumerate() {
            let attached = match side {
                Side::Right => f.dst == x,
                Side::Left => f.src == x,
            };
            if attached {
                index.insert((gi, fi), basis.len());
                basis.push(ModBasis {
                    name: format!("g{gi}:{}", f.name),
                    object: match side {
                        Side::Right => f.src,
                        Side::Left => f.dst,
                    },
                    degree: cat.grading.add(n, f.degree),
                });
            }
        }
    }
    let mut action = HashMap::new();
    for (gi, &(_, n)) in generators.iter().enumerate() {
        for (fi, _) in cat.basis.iter().enumerate() {
            let Some(&m) = index.get(&(gi, fi)) else { continue };
            for (g, gm) in cat.basis.iter().enumerate() {
                let prod = match side {
                    // (i, f) . g = (i, f g); need dst(g) = src(f) = object
                    Side::Right => cat.compose_basis(fi, g),
                    // g . (i, f) = ±(i, g f); need src(g) = dst(f) = object
                    Side::Left => cat.compose_basis(g, fi),
                };
                let Some(prod) = prod else { continue };
                let mut v: LinVec = prod
                    .into_iter()
                    .map(|(e, c)| (index[&(gi, e)], c))
                    .collect();
                v = linvec_normalize(v);
                if side == Side::Left {
                    let s = cat.grading.koszul_sign(n, gm.degree);
                    v = linvec_scale(&v, &cat.field.one().signed(s));
                }
                if !v.is_empty() {
                    action.insert((g, m), v);
                }
            }
        }
    }
    let dim = basis.len();
    CdgModule {
        side,
        basis,
        action,
        diff: vec![Vec::new(); dim],
        presentation: Some(Presentation {
            generators: generators.to_vec(),
            iota: (0..dim).map(|i| vec![(i, cat.field.one())]).collect(),
            pi: (0..dim).map(|i| vec![(i, cat.field.one())]).collect(),
        }),
    }
}

/// Coordinates of the `gi`-th generator inside `free_graded_module`: the
/// identity of its object, viewed in the `(gi, f)` basis.
pub fn free_generator(cat: &CdgCategory, side: Side, generators: &[(usize, Degree)], gi: usize) -> LinVec {
    // rebuild the index map the same way free_graded_module does
    let mut pos = 0usize;
    let mut out: LinVec = Vec::new();
    for (gj, &(x, _)) in generators.iter().enumerate() {
        for (fi, f) in cat.basis.iter().enumerate() {
            let attached = match side {
                Side::Right => f.dst == x,
                Side::Left => f.src == x,
            };
            if attached {
                if gj == gi {
                    if let Some(c) = linvec_get(&cat.identity(x), fi) {
                        out.push((pos, c.clone()));
                    }
                }
                pos += 1;
            }
        }
    }
    out
}

/// The representable right QDG-module `R_X`: components `Hom(Y, X)` with the
/// composition action and the hom differential.  Its module curvature is
/// left multiplication by `h_X`.
pub fn representable_qdg(cat: &CdgCategory, x: usize) -> CdgModule {
    let mut module = free_graded_module(cat, Side::Right, &[(x, cat.grading.zero())]);
    // the free basis is (0, f) for f with dst = x, in cat-basis order
    let mut back: Vec<usize> = Vec::new();
    for (fi, f) in cat.basis.iter().enumerate() {
        if f.dst == x {
            back.push(fi);
        }
    }
    let fwd: HashMap<usize, usize> = back.iter().enumerate().map(|(m, &fi)| (fi, m)).collect();
    for (m, &fi) in back.iter().enumerate() {
        module.diff[m] = cat.diff[fi]
            .iter()
            .filter_map(|(e, c)| fwd.get(e).map(|&j| (j, c.clone())))
            .collect();
    }
    module
}

/// Lemma-A free CDG-module on a graded module `P` (differential of `P`
/// ignored): `Q = P ⊕ P[-1]` spanned by formal `p' + d(p'')`, with
///
/// ```text
/// left:   d(p', p'') = (h p'', p')
///         b . (p', p'') = (b p' - (-1)^{|b|} d(b) p'', (-1)^{|b|} b p'')
/// right:  d(p', p'') = (-p'' h, p')
///         (p', p'') . b = (p' b - (-1)^{|p''|} p'' d(b), p'' b)
/// ```
pub fn free_cdg_module(cat: &CdgCategory, p: &CdgModule) -> CdgModule {
    let g = cat.grading;
    let n = p.dim();
    // indices: 0..n the P part, n..2n the P[-1] part (degree +1)
    let mut basis = Vec::new();
    for m in &p.basis {
        basis.push(ModBasis {
            name: m.name.clone(),
            object: m.object,
            degree: m.degree,
        });
    }
    for m in &p.basis {
        basis.push(ModBasis {
            name: format!("d({})", m.name),
            object: m.object,
            degree: g.add(m.degree, g.one()),
        });
    }
    let lift = |v: &LinVec, offset: usize| -> LinVec {
        v.iter().map(|(i, c)| (i + offset, c.clone())).collect()
    };
    let mut diff: Vec<LinVec> = Vec::new();
    for m in 0..n {
        diff.push(vec![(m + n, cat.field.one())]);
    }
    for m in 0..n {
        let me = vec![(m, cat.field.one())];
        let h = cat.curvature_of(p.basis[m].object);
        let v = match p.side {
            Side::Left => p.act(cat, &h, &me),
            Side::Right => linvec_scale(&p.act(cat, &h, &me), &cat.field.one().neg()),
        };
        diff.push(v);
    }
    let mut action = HashMap::new();
    for b in 0..cat.basis.len() {
        let bdeg = cat.degree(b);
        let be = vec![(b, cat.field.one())];
        for m in 0..n {
            if !p.composable(cat, b, m) {
                continue;
            }
            let me = vec![(m, cat.field.one())];
            let bm = p.act(cat, &be, &me);
            // P part acts as in P
            if !bm.is_empty() {
                action.insert((b, m), bm.clone());
            }
            // P[-1] part
            let v = match p.side {
                Side::Left => {
                    let sign = g.koszul_sign(bdeg, g.one());
                    let mut v = lift(&bm, n);
                    v = linvec_scale(&v, &cat.field.one().signed(sign));
                    let db_m = p.act(cat, &cat.diff[b], &me);
                    let mut out = linvec_scale(&db_m, &cat.field.one().signed(sign).neg());
                    linvec_axpy(&mut out, &cat.field.one(), &v);
                    out
                }
                Side::Right => {
                    let sign = g.koszul_sign(p.basis[m].degree, g.one());
                    let mut out = lift(&bm, n);
                    let m_db = p.act(cat, &cat.diff[b], &me);
                    linvec_axpy(
                        &mut out,
                        &cat.field.one().signed(sign).neg(),
                        &m_db,
                    );
                    out
                }
            };
            if !v.is_empty() {
                action.insert((b, m + n), v);
            }
        }
    }
    // The evident degreewise splitting Q = P ⊕ P[-1] is not B-linear (the
    // action has an off-diagonal d(b) term), so no presentation is carried
    // here; free_cdg_on_generators computes an honest one when P is free.
    CdgModule {
        side: p.side,
        basis,
        action,
        diff,
        presentation: None,
    }
}

/// Lemma-A transfer: the differential `π d ι` makes a summand `P` of a
/// QDG-module `Q` into a QDG-module.  `iota`/`pi` must be degree-0 B-linear
/// with `π ι = id`.
pub fn qdg_structure_on_projective(
    cat: &CdgCategory,
    p: &CdgModule,
    q: &CdgModule,
    iota: &ModuleMorphism,
    pi: &ModuleMorphism,
) -> Result<CdgModule> {
    iota.check_linear(cat, p, q)?;
    pi.check_linear(cat, q, p)?;
    for i in 0..p.dim() {
        if pi.apply(&iota.map[i]) != vec![(i, cat.field.one())] {
            return Err(CdgError::Invalid("pi . iota is not the identity".into()));
        }
    }
    let diff = (0..p.dim())
        .map(|m| pi.apply(&q.diff_elt(&iota.map[m])))
        .collect();
    Ok(CdgModule {
        diff,
        ..p.clone()
    })
}

/// Basis of the space of B-linear maps `src -> dst` of the given degree.
/// Unknowns are matrix entries on slots compatible with objects and degrees;
/// the linearity equations cut out the hom space.
pub fn hom_space(
    cat: &CdgCategory,
    src: &CdgModule,
    dst: &CdgModule,
    degree: Degree,
) -> Vec<ModuleMorphism> {
    let g = cat.grading;
    let degree = g.canon(degree.0);
    // slots (j, i): dst basis j can receive src basis i
    let mut slots: Vec<(usize, usize)> = Vec::new();
    let mut slot_index: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..src.dim() {
        let want = g.add(src.basis[i].degree, degree);
        for j in 0..dst.dim() {
            if dst.basis[j].object == src.basis[i].object && dst.basis[j].degree == want {
                slot_index.insert((j, i), slots.len());
                slots.push((j, i));
            }
        }
    }
    if slots.is_empty() {
        return Vec::new();
    }
    // linearity equations, one per (f, m, output coordinate)
    let mut triplets: Vec<(usize, usize, crate::scalar::Scalar)> = Vec::new();
    let mut row = 0usize;
    for f in 0..cat.basis.len() {
        for m in 0..src.dim() {
            if !src.composable(cat, f, m) {
                continue;
            }
            let fe = vec![(f, cat.field.one())];
            let me = vec![(m, cat.field.one())];
            let fm = src.act(cat, &fe, &me);
            // φ(f.m) - sign * f.φ(m) = 0, coordinatewise in dst
            let sign = match src.side {
                Side::Left => g.koszul_sign(degree, cat.degree(f)),
                Side::Right => 1,
            };
            // rows: one per output coordinate jj of φ(f.m) - sign * f.φ(m)
            let mut out_coords: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
            for (i, _) in &fm {
                for j in 0..dst.dim() {
                    if slot_index.contains_key(&(j, *i)) {
                        out_coords.insert(j);
                    }
                }
            }
            let mut f_phi: Vec<(usize, LinVec)> = Vec::new(); // (slot for (j,m), f.e_j)
            for j in 0..dst.dim() {
                if let Some(&s) = slot_index.get(&(j, m)) {
                    let fj = dst.act(cat, &fe, &vec![(j, cat.field.one())]);
                    for (jj, _) in &fj {
                        out_coords.insert(*jj);
                    }
                    f_phi.push((s, fj));
                }
            }
            for jj in out_coords {
                let mut row_entries: HashMap<usize, crate::scalar::Scalar> = HashMap::new();
                for (i, c) in &fm {
                    if let Some(&s) = slot_index.get(&(jj, *i)) {
                        let e = row_entries.entry(s).or_insert_with(|| cat.field.zero());
                        *e = e.add(c);
                    }
                }
                for (s, fj) in &f_phi {
                    if let Some(c) = linvec_get(fj, jj) {
                        let e = row_entries.entry(*s).or_insert_with(|| cat.field.zero());
                        *e = e.sub(&c.signed(sign));
                    }
                }
                let mut any = false;
                for (s, c) in row_entries {
                    if !c.is_zero() {
                        triplets.push((row, s, c));
                        any = true;
                    }
                }
                if any {
                    row += 1;
                }
            }
        }
    }
    let m = SparseMatrix::from_triplets(row.max(1), slots.len(), triplets)
        .expect("hom constraint matrix");
    let kernel = kernel_basis_with_field(&m, cat.field);
    kernel
        .into_iter()
        .map(|v| {
            let mut map: Vec<LinVec> = vec![Vec::new(); src.dim()];
            for (s, c) in v {
                let (j, i) = slots[s];
                map[i].push((j, c));
            }
            for col in &mut map {
                *col = linvec_normalize(std::mem::take(col));
            }
            ModuleMorphism { degree, map }
        })
        .collect()
}

/// Flatten a morphism to a vector over `(dst_index * src_dim + src_index)`.
fn flatten_morphism(phi: &ModuleMorphism, src_dim: usize) -> LinVec {
    let mut v: LinVec = Vec::new();
    for (i, col) in phi.map.iter().enumerate() {
        for (j, c) in col {
            v.push((j * src_dim + i, c.clone()));
        }
    }
    linvec_normalize(v)
}

/// Coordinates of `phi` in a basis of morphisms, or `None` if outside the span.
pub fn morphism_coordinates(
    phi: &ModuleMorphism,
    basis: &[ModuleMorphism],
    src_dim: usize,
    dst_dim: usize,
) -> Option<LinVec> {
    let cols: Vec<LinVec> = basis.iter().map(|b| flatten_morphism(b, src_dim)).collect();
    let m = SparseMatrix::from_columns(src_dim * dst_dim, &cols);
    m.solve(&flatten_morphism(phi, src_dim))
}

/// The complex of B-linear maps `src -> dst` with
/// `d(φ) = d_dst φ - (-1)^{|φ|} φ d_src`, together with the chosen basis of
/// each degree component.
pub struct HomComplex {
    pub complex: FiniteComplex,
    /// Basis morphisms per canonical degree.
    pub bases: std::collections::BTreeMap<i64, Vec<ModuleMorphism>>,
}

pub fn hom_complex(cat: &CdgCategory, src: &CdgModule, dst: &CdgModule) -> Result<HomComplex> {
    if src.side != dst.side {
        return Err(CdgError::Incompatible("mixed module sides".into()));
    }
    let g = cat.grading;
    let mut degrees: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
    for i in 0..src.dim() {
        for j in 0..dst.dim() {
            if dst.basis[j].object == src.basis[i].object {
                degrees.insert(g.sub(dst.basis[j].degree, src.basis[i].degree).0);
            }
        }
    }
    let mut bases = std::collections::BTreeMap::new();
    let mut complex = FiniteComplex::new(cat.field, g);
    for &deg in &degrees {
        let b = hom_space(cat, src, dst, Degree(deg));
        if !b.is_empty() {
            complex.set_dim(Degree(deg), b.len());
            bases.insert(deg, b);
        }
    }
    let keys: Vec<i64> = bases.keys().copied().collect();
    for &deg in &keys {
        let next = g.add(Degree(deg), g.one()).0;
        let Some(next_basis) = bases.get(&next) else {
            // differential must vanish out of this degree
            for phi in &bases[&deg] {
                let dphi = phi.differential(cat, src, dst);
                if dphi.map.iter().any(|v| !v.is_empty()) {
                    return Err(CdgError::Invalid(
                        "hom differential escapes the computed hom spaces".into(),
                    ));
                }
            }
            continue;
        };
        let mut cols: Vec<LinVec> = Vec::new();
        for phi in &bases[&deg] {
            let dphi = phi.differential(cat, src, dst);
            let coords = morphism_coordinates(&dphi, next_basis, src.dim(), dst.dim())
                .ok_or_else(|| {
                    CdgError::Invalid("hom differential escapes the hom space".into())
                })?;
            cols.push(coords);
        }
        let m = SparseMatrix::from_columns(next_basis.len(), &cols);
        complex.set_map(Degree(deg), m)?;
    }
    Ok(HomComplex { complex, bases })
}

/// The unique B-linear degree-0 map `free -> dst` sending the generators of
/// a free graded module to the prescribed images, built termwise: the basis
/// vector `(gi, f)` maps to `m_i . f` (right) or `±f . m_i` (left, with the
/// Koszul sign of moving `f` past the degree of the generator).
pub fn map_from_generator_images(
    cat: &CdgCategory,
    free: &CdgModule,
    generators: &[(usize, Degree)],
    dst: &CdgModule,
    images: &[LinVec],
) -> Result<ModuleMorphism> {
    if images.len() != generators.len() {
        return Err(CdgError::Dimension("one image per generator".into()));
    }
    let mut map: Vec<LinVec> = Vec::new();
    for (gi, &(x, n)) in generators.iter().enumerate() {
        for (fi, f) in cat.basis.iter().enumerate() {
            let attached = match free.side {
                Side::Right => f.dst == x,
                Side::Left => f.src == x,
            };
            if !attached {
                continue;
            }
            let fe = vec![(fi, cat.field.one())];
            let mut img = dst.act(cat, &fe, &images[gi]);
            if free.side == Side::Left {
                let s = cat.grading.koszul_sign(n, f.degree);
                img = linvec_scale(&img, &cat.field.one().signed(s));
            }
            map.push(img);
        }
    }
    if map.len() != free.dim() {
        return Err(CdgError::Dimension(
            "generator list does not match the free module".into(),
        ));
    }
    Ok(ModuleMorphism {
        degree: cat.grading.zero(),
        map,
    })
}

/// Free CDG-module on the free graded module with the given generators,
/// equipped with an honest summand-of-free presentation: the underlying
/// graded module is free on the doubled generator list, via an explicit
/// B-linear isomorphism (solved, since the evident splitting is not linear).
pub fn free_cdg_on_generators(
    cat: &CdgCategory,
    side: Side,
    generators: &[(usize, Degree)],
) -> Result<CdgModule> {
    let p = free_graded_module(cat, side, generators);
    let mut q = free_cdg_module(cat, &p);
    let mut doubled: Vec<(usize, Degree)> = generators.to_vec();
    doubled.extend(
        generators
            .iter()
            .map(|&(x, d)| (x, cat.grading.add(d, cat.grading.one()))),
    );
    let free = free_graded_module(cat, side, &doubled);
    // φ: free -> q sends generator i to the P-part generator and generator
    // n+i to its formal differential
    let n = generators.len();
    let pdim = p.dim();
    let mut images: Vec<LinVec> = Vec::new();
    for gi in 0..n {
        images.push(free_generator(cat, side, generators, gi));
    }
    for gi in 0..n {
        let v: LinVec = free_generator(cat, side, generators, gi)
            .into_iter()
            .map(|(i, c)| (i + pdim, c))
            .collect();
        images.push(v);
    }
    let phi = map_from_generator_images(cat, &free, &doubled, &q, &images)?;
    // invert φ (square, degreewise iso) to get iota = φ^{-1}
    let cols: Vec<LinVec> = phi.map.clone();
    let m = SparseMatrix::from_columns(q.dim(), &cols);
    let units: Vec<LinVec> = (0..q.dim()).map(|i| vec![(i, cat.field.one())]).collect();
    let iota = m.solve_many(&units).ok_or_else(|| {
        CdgError::Invalid("free CDG presentation map is not invertible".into())
    })?;
    q.presentation = Some(Presentation {
        generators: doubled,
        iota,
        pi: phi.map,
    });
    Ok(q)
}

/// The tensor complex `N ⊗_B M` (right ⊗ left): the quotient of the graded
/// space spanned by matching pairs by the relations `n f ⊗ m - n ⊗ f m`,
/// with `d(n ⊗ m) = d(n) ⊗ m + (-1)^{|n|} n ⊗ d(m)`.
pub struct TensorComplex {
    pub complex: FiniteComplex,
    /// Ambient flat basis: matching pairs (n index, m index).
    pub pairs: Vec<(usize, usize)>,
    pub quotient: QuotientMap,
    /// Local (degree, position) of each quotient basis vector.
    pub local: Vec<(i64, usize)>,
}

pub fn tensor_over_base(
    cat: &CdgCategory,
    n_mod: &CdgModule,
    m_mod: &CdgModule,
) -> Result<TensorComplex> {
    if n_mod.side != Side::Right || m_mod.side != Side::Left {
        return Err(CdgError::Incompatible(
            "tensor_over_base needs (right, left) modules".into(),
        ));
    }
    let g = cat.grading;
    let mut pairs = Vec::new();
    let mut pair_index: HashMap<(usize, usize), usize> = HashMap::new();
    for ni in 0..n_mod.dim() {
        for mi in 0..m_mod.dim() {
            if n_mod.basis[ni].object == m_mod.basis[mi].object {
                pair_index.insert((ni, mi), pairs.len());
                pairs.push((ni, mi));
            }
        }
    }
    let flat = |nv: &LinVec, mv: &LinVec| -> LinVec {
        let mut out = Vec::new();
        for (ni, nc) in nv {
            for (mi, mc) in mv {
                if let Some(&k) = pair_index.get(&(*ni, *mi)) {
                    out.push((k, nc.mul(mc)));
                }
            }
        }
        linvec_normalize(out)
    };
    // relations n f ⊗ m - n ⊗ f m over all basis triples
    let mut relations: Vec<LinVec> = Vec::new();
    for f in 0..cat.basis.len() {
        let fe = vec![(f, cat.field.one())];
        for ni in 0..n_mod.dim() {
            if n_mod.basis[ni].object != cat.basis[f].dst {
                continue;
            }
            let nf = n_mod.act(cat, &fe, &vec![(ni, cat.field.one())]);
            for mi in 0..m_mod.dim() {
                if m_mod.basis[mi].object != cat.basis[f].src {
                    continue;
                }
                let fm = m_mod.act(cat, &fe, &vec![(mi, cat.field.one())]);
                let mut r = flat(&nf, &vec![(mi, cat.field.one())]);
                linvec_axpy(
                    &mut r,
                    &cat.field.one().neg(),
                    &flat(&vec![(ni, cat.field.one())], &fm),
                );
                if !r.is_empty() {
                    relations.push(r);
                }
            }
        }
    }
    let quotient = quotient_by_span_in(cat.field, pairs.len(), &relations);
    // degrees of quotient basis vectors = degrees of their free columns
    let degree_of = |k: usize| -> i64 {
        let (ni, mi) = pairs[k];
        g.add(n_mod.basis[ni].degree, m_mod.basis[mi].degree).0
    };
    let mut complex = FiniteComplex::new(cat.field, g);
    let mut local: Vec<(i64, usize)> = Vec::new();
    let mut counts: std::collections::BTreeMap<i64, usize> = std::collections::BTreeMap::new();
    for &col in &quotient.free_columns {
        let d = degree_of(col);
        let pos = counts.entry(d).or_insert(0);
        local.push((d, *pos));
        *pos += 1;
    }
    for (&d, &c) in &counts {
        complex.set_dim(Degree(d), c);
    }
    // ambient differential
    let d_ambient = |k: usize| -> LinVec {
        let (ni, mi) = pairs[k];
        let mut v = flat(&n_mod.diff[ni], &vec![(mi, cat.field.one())]);
        let sign = g.koszul_sign(n_mod.basis[ni].degree, g.one());
        linvec_axpy(
            &mut v,
            &cat.field.one().signed(sign),
            &flat(&vec![(ni, cat.field.one())], &m_mod.diff[mi]),
        );
        v
    };
    // per-degree matrices
    let mut triplets_by_deg: std::collections::BTreeMap<i64, Vec<(usize, usize, crate::scalar::Scalar)>> =
        std::collections::BTreeMap::new();
    for (q, &col) in quotient.free_columns.iter().enumerate() {
        let (deg, pos) = local[q];
        let img = quotient.projection.apply(&d_ambient(col));
        for (qq, c) in img {
            let (_, pos2) = local[qq];
            triplets_by_deg
                .entry(deg)
                .or_default()
                .push((pos2, pos, c));
        }
    }
    for (deg, trips) in triplets_by_deg {
        let next = g.add(Degree(deg), g.one());
        let m = SparseMatrix::from_triplets(complex.dim(next), complex.dim(Degree(deg)), trips)?;
        complex.set_map(Degree(deg), m)?;
    }
    complex.check_square_zero()?;
    Ok(TensorComplex {
        complex,
        pairs,
        quotient,
        local,
    })
}

/// External tensor product of modules over different categories: a module
/// over `tensor(cat1, cat2)` with the Koszul-signed action.
pub fn external_tensor(
    cat1: &CdgCategory,
    m1: &CdgModule,
    cat2: &CdgCategory,
    m2: &CdgModule,
) -> Result<CdgModule> {
    if m1.side != m2.side {
        return Err(CdgError::Incompatible("mixed module sides".into()));
    }
    if cat1.field != cat2.field || cat1.grading != cat2.grading {
        return Err(CdgError::Incompatible("field or grading mismatch".into()));
    }
    let g = cat1.grading;
    let n2 = cat2.num_objects();
    let b2 = cat2.basis.len();
    let obj_index = |x1: usize, x2: usize| x1 * n2 + x2;
    let mor_index = |f1: usize, f2: usize| f1 * b2 + f2;
    let midx = |i1: usize, i2: usize| i1 * m2.dim() + i2;
    let mut basis = Vec::new();
    for b1 in &m1.basis {
        for b2e in &m2.basis {
            basis.push(ModBasis {
                name: format!("{} ⊗ {}", b1.name, b2e.name),
                object: obj_index(b1.object, b2e.object),
                degree: g.add(b1.degree, b2e.degree),
            });
        }
    }
    let pair = |v1: &LinVec, v2: &LinVec| -> LinVec {
        let mut out = Vec::new();
        for (i1, c1) in v1 {
            for (i2, c2) in v2 {
                out.push((midx(*i1, *i2), c1.mul(c2)));
            }
        }
        linvec_normalize(out)
    };
    let mut action = HashMap::new();
    for f1 in 0..cat1.basis.len() {
        for f2 in 0..cat2.basis.len() {
            for i1 in 0..m1.dim() {
                if !m1.composable(cat1, f1, i1) {
                    continue;
                }
                for i2 in 0..m2.dim() {
                    if !m2.composable(cat2, f2, i2) {
                        continue;
                    }
                    let a1 = m1.act(cat1, &vec![(f1, cat1.field.one())], &vec![(i1, cat1.field.one())]);
                    let a2 = m2.act(cat2, &vec![(f2, cat2.field.one())], &vec![(i2, cat2.field.one())]);
                    let sign = match m1.side {
                        // (f'⊗f'').(m'⊗m'') = ±(f'm')⊗(f''m''), moving f'' past m'
                        Side::Left => g.koszul_sign(cat2.degree(f2), m1.basis[i1].degree),
                        // (m'⊗m'').(f'⊗f'') = ±(m'f')⊗(m''f''), moving f' past m''
                        Side::Right => g.koszul_sign(m2.basis[i2].degree, cat1.degree(f1)),
                    };
                    let v = linvec_scale(&pair(&a1, &a2), &cat1.field.one().signed(sign));
                    if !v.is_empty() {
                        action.insert((mor_index(f1, f2), midx(i1, i2)), v);
                    }
                }
            }
        }
    }
    let mut diff = Vec::new();
    for i1 in 0..m1.dim() {
        for i2 in 0..m2.dim() {
            let mut v = pair(&m1.diff[i1], &vec![(i2, cat2.field.one())]);
            let sign = g.koszul_sign(m1.basis[i1].degree, g.one());
            linvec_axpy(
                &mut v,
                &cat1.field.one().signed(sign),
                &pair(&vec![(i1, cat1.field.one())], &m2.diff[i2]),
            );
            diff.push(v);
        }
    }
    Ok(CdgModule {
        side: m1.side,
        basis,
        action,
        diff,
        presentation: None,
    })
}

/// Cone of a closed degree-0 morphism `f: src -> dst`: underlying graded
/// module `dst ⊕ src[-1]` (so that `d` still raises degree by one) with the
/// diagonal action and `d(n, m) = (d n + f(m), -d m)`.
pub fn cone(
    cat: &CdgCategory,
    f: &ModuleMorphism,
    src: &CdgModule,
    dst: &CdgModule,
) -> Result<CdgModule> {
    if f.degree != cat.grading.zero() {
        return Err(CdgError::Invalid("cone needs a degree-0 morphism".into()));
    }
    f.check_linear(cat, src, dst)?;
    if !f.is_closed(cat, src, dst) {
        return Err(CdgError::Invalid("cone needs a closed morphism".into()));
    }
    let shifted = src.shift(cat, cat.grading.neg(cat.grading.one()));
    let nd = dst.dim();
    let mut basis = dst.basis.clone();
    basis.extend(shifted.basis.iter().cloned());
    let mut action = dst.action.clone();
    for (&(b, m), v) in &shifted.action {
        action.insert(
            (b, m + nd),
            v.iter().map(|(i, c)| (i + nd, c.clone())).collect(),
        );
    }
    let mut diff: Vec<LinVec> = dst.diff.clone();
    for m in 0..src.dim() {
        // f(m) in the dst block plus the shifted differential (already -d)
        let mut v = f.map[m].clone();
        let sd: LinVec = shifted.diff[m].iter().map(|(i, c)| (i + nd, c.clone())).collect();
        linvec_axpy(&mut v, &cat.field.one(), &sd);
        diff.push(v);
    }
    Ok(CdgModule {
        side: src.side,
        basis,
        action,
        diff,
        presentation: None,
    })
}

/// Total CDG-module of a three-term complex `K -> L -> M` of closed
/// degree-0 morphisms with `p i = 0`, required to be exact as graded
/// modules.  Built as `cone(Cone(i) -> M)`.
pub fn total_of_exact_triple(
    cat: &CdgCategory,
    i: &ModuleMorphism,
    p: &ModuleMorphism,
    k: &CdgModule,
    l: &CdgModule,
    m: &CdgModule,
) -> Result<CdgModule> {
    i.check_linear(cat, k, l)?;
    p.check_linear(cat, l, m)?;
    if !i.is_closed(cat, k, l) || !p.is_closed(cat, l, m) {
        return Err(CdgError::Invalid("triple maps must be closed".into()));
    }
    for v in &i.map {
        if !p.apply(v).is_empty() {
            return Err(CdgError::Invalid("p . i is nonzero".into()));
        }
    }
    // graded exactness: i injective, p surjective, dims add up
    let mi = SparseMatrix::from_columns(l.dim(), &i.map);
    let mp = SparseMatrix::from_columns(m.dim(), &p.map);
    if mi.rank() != k.dim() || mp.rank() != m.dim() || l.dim() != k.dim() + m.dim() {
        return Err(CdgError::Invalid(
            "triple is not exact as graded modules".into(),
        ));
    }
    let c1 = cone(cat, i, k, l)?;
    // φ: Cone(i) -> M, (l, k) ↦ p(l)
    let mut map: Vec<LinVec> = p.map.clone();
    map.extend(std::iter::repeat(Vec::new()).take(k.dim()));
    let phi = ModuleMorphism {
        degree: cat.grading.zero(),
        map,
    };
    cone(cat, &phi, &c1, m)
}

/// Solve `d H + H d = id` in the endomorphism complex; returns the
/// contracting homotopy if the module is contractible.
pub fn contracting_homotopy(cat: &CdgCategory, m: &CdgModule) -> Option<ModuleMorphism> {
    let g = cat.grading;
    let basis = hom_space(cat, m, m, g.neg(g.one()));
    if basis.is_empty() && m.dim() > 0 {
        return None;
    }
    let id = ModuleMorphism::identity(m, cat);
    // unknowns x_b; equation: Σ x_b (d H_b + H_b d) = id, flattened
    let cols: Vec<LinVec> = basis
        .iter()
        .map(|h| {
            let mut s = ModuleMorphism {
                degree: g.zero(),
                map: (0..m.dim()).map(|i| h.apply(&m.diff[i])).collect(),
            };
            for i in 0..m.dim() {
                linvec_axpy(&mut s.map[i], &cat.field.one(), &m.diff_elt(&h.map[i]));
            }
            flatten_morphism(&s, m.dim())
        })
        .collect();
    let mat = SparseMatrix::from_columns(m.dim() * m.dim(), &cols);
    let target = flatten_morphism(&id, m.dim());
    let sol = mat.solve(&target)?;
    let mut map: Vec<LinVec> = vec![Vec::new(); m.dim()];
    for (b, c) in sol {
        for (i, col) in basis[b].map.iter().enumerate() {
            linvec_axpy(&mut map[i], &c, col);
        }
    }
    Some(ModuleMorphism {
        degree: g.neg(g.one()),
        map,
    })
}

/// The DG- (or, with `qdg`, CDG-) category of the given right modules: hom
/// spaces are the Hom complexes, composition is composition, and with `qdg`
/// the curvature of an object is its module curvature viewed inside its
/// endomorphism space.  Objects must carry a summand-of-free presentation.
pub fn mf_category(
    cat: &CdgCategory,
    objects: &[CdgModule],
    qdg: bool,
) -> Result<CdgCategory> {
    use crate::category::BasisMor;
    for (i, obj) in objects.iter().enumerate() {
        if obj.side != Side::Right {
            return Err(CdgError::Incompatible(format!(
                "object {i} is not a right module"
            )));
        }
        let p = obj
            .presentation
            .as_ref()
            .ok_or_else(|| CdgError::Unsupported(format!(
                "object {i} lacks a summand-of-free presentation"
            )))?;
        validate_presentation(cat, obj, p)
            .map_err(|e| CdgError::Invalid(format!("object {i}: {e}")))?;
        if !qdg && !obj.is_cdg(cat) {
            return Err(CdgError::Invalid(format!(
                "object {i} is not a CDG-module; use the QDG variant"
            )));
        }
    }
    let g = cat.grading;
    // hom bases per ordered pair
    let mut basis: Vec<BasisMor> = Vec::new();
    let mut bases: HashMap<(usize, usize), Vec<(usize, ModuleMorphism)>> = HashMap::new();
    for (a, ma) in objects.iter().enumerate() {
        for (b, mb) in objects.iter().enumerate() {
            let hc = hom_complex(cat, ma, mb)?;
            let mut list = Vec::new();
            for (deg, morphs) in hc.bases {
                for (k, phi) in morphs.into_iter().enumerate() {
                    list.push((basis.len(), phi));
                    basis.push(BasisMor {
                        name: format!("h[{a}->{b}]{deg}.{k}"),
                        src: a,
                        dst: b,
                        degree: g.canon(deg),
                    });
                }
            }
            bases.insert((a, b), list);
        }
    }
    let coords_in = |a: usize, b: usize, phi: &ModuleMorphism| -> Result<LinVec> {
        let list = &bases[&(a, b)];
        let morphs: Vec<ModuleMorphism> = list.iter().map(|(_, p)| p.clone()).collect();
        let local = morphism_coordinates(phi, &morphs, objects[a].dim(), objects[b].dim())
            .ok_or_else(|| CdgError::Invalid("morphism outside computed hom space".into()))?;
        Ok(local
            .into_iter()
            .map(|(j, c)| (list[j].0, c))
            .collect())
    };
    let mut compose: HashMap<(usize, usize), LinVec> = HashMap::new();
    for b_obj in 0..objects.len() {
        for c_obj in 0..objects.len() {
            for a_obj in 0..objects.len() {
                // f: b -> c after g: a -> b
                for (fi, fphi) in &bases[&(b_obj, c_obj)] {
                    for (gi, gphi) in &bases[&(a_obj, b_obj)] {
                        let comp = ModuleMorphism {
                            degree: g.add(fphi.degree, gphi.degree),
                            map: (0..objects[a_obj].dim())
                                .map(|i| fphi.apply(&gphi.map[i]))
                                .collect(),
                        };
                        let v = coords_in(a_obj, c_obj, &comp)?;
                        if !v.is_empty() {
                            compose.insert((*fi, *gi), v);
                        }
                    }
                }
            }
        }
    }
    let mut unit = Vec::new();
    for (a, ma) in objects.iter().enumerate() {
        unit.push(coords_in(a, a, &ModuleMorphism::identity(ma, cat))?);
    }
    let mut diff_table: Vec<LinVec> = vec![Vec::new(); basis.len()];
    for a in 0..objects.len() {
        for b in 0..objects.len() {
            for (fi, fphi) in &bases[&(a, b)] {
                let dphi = fphi.differential(cat, &objects[a], &objects[b]);
                diff_table[*fi] = coords_in(a, b, &dphi)?;
            }
        }
    }
    let mut curvature = Vec::new();
    for (a, ma) in objects.iter().enumerate() {
        if qdg {
            let c = ModuleMorphism {
                degree: g.add(g.one(), g.one()),
                map: ma.curvature(cat),
            };
            curvature.push(coords_in(a, a, &c)?);
        } else {
            curvature.push(Vec::new());
        }
    }
    Ok(CdgCategory {
        field: cat.field,
        grading: g,
        objects: (0..objects.len()).map(|i| format!("M{i}")).collect(),
        basis,
        compose,
        unit,
        diff: diff_table,
        curvature,
    })
}

/// The diagonal left CDG-module over `E = tensor(B, opposite(B))`: the
/// component at `(X, Y^op)` is `Hom_B(Y, X)`, with
/// `(f ⊗ g^op) . b = (-1)^{σ(|g|, |b|)} f b g`.
pub fn diagonal_bimodule(b: &CdgCategory) -> (CdgCategory, CdgModule) {
    let e = b.tensor(&b.opposite()).expect("same field and grading");
    let n = b.num_objects();
    let nb = b.basis.len();
    let obj_index = |x1: usize, x2: usize| x1 * n + x2;
    let mor_index = |f1: usize, f2: usize| f1 * nb + f2;
    let basis: Vec<ModBasis> = b
        .basis
        .iter()
        .map(|m| ModBasis {
            name: m.name.clone(),
            object: obj_index(m.dst, m.src),
            degree: m.degree,
        })
        .collect();
    let mut action = HashMap::new();
    for f in 0..nb {
        for gg in 0..nb {
            let ei = mor_index(f, gg);
            for m in 0..nb {
                // need object(m) = src of f⊗g^op = (src f, dst g)
                if b.basis[m].dst != b.basis[f].src || b.basis[m].src != b.basis[gg].dst {
                    continue;
                }
                let fm = b.compose_basis(f, m).unwrap();
                let fmg = b.compose_elts(&fm, &vec![(gg, b.field.one())]);
                let sign = b.grading.koszul_sign(b.degree(gg), b.degree(m));
                let v = linvec_scale(&fmg, &b.field.one().signed(sign));
                if !v.is_empty() {
                    action.insert((ei, m), v);
                }
            }
        }
    }
    let module = CdgModule {
        side: Side::Left,
        basis,
        action,
        diff: b.diff.clone(),
        presentation: None,
    };
    (e, module)
}

/// The diagonal right CDG-module over the same `E`: the component at
/// `(P, Q^op)` is `Hom_B(P, Q)`, with
/// `b . (f ⊗ g^op) = (-1)^{σ(|g|, |b| + |f|)} g b f`.
pub fn right_diagonal_bimodule(b: &CdgCategory) -> (CdgCategory, CdgModule) {
    let e = b.tensor(&b.opposite()).expect("same field and grading");
    let n = b.num_objects();
    let nb = b.basis.len();
    let obj_index = |x1: usize, x2: usize| x1 * n + x2;
    let mor_index = |f1: usize, f2: usize| f1 * nb + f2;
    let basis: Vec<ModBasis> = b
        .basis
        .iter()
        .map(|m| ModBasis {
            name: m.name.clone(),
            object: obj_index(m.src, m.dst),
            degree: m.degree,
        })
        .collect();
    let mut action = HashMap::new();
    for f in 0..nb {
        for gg in 0..nb {
            let ei = mor_index(f, gg);
            for m in 0..nb {
                // need object(m) = dst of f⊗g^op = (dst f, src g)
                if b.basis[m].src != b.basis[f].dst || b.basis[m].dst != b.basis[gg].src {
                    continue;
                }
                let gm = b.compose_basis(gg, m).unwrap();
                let gmf = b.compose_elts(&gm, &vec![(f, b.field.one())]);
                let sign = b.grading.koszul_sign(
                    b.degree(gg),
                    b.grading.add(b.degree(m), b.degree(f)),
                );
                let v = linvec_scale(&gmf, &b.field.one().signed(sign));
                if !v.is_empty() {
                    action.insert((ei, m), v);
                }
            }
        }
    }
    let module = CdgModule {
        side: Side::Right,
        basis,
        action,
        diff: b.diff.clone(),
        presentation: None,
    };
    (e, module)
}

/// Basis bookkeeping for [`restrict`]: entry `k` of the restricted module
/// is the pair `(x, i)` of a `B`-object and an `M`-basis index over `F(x)`.
/// The enumeration order here must match `restrict`.
pub fn restrict_index(
    b_cat: &CdgCategory,
    f: &crate::functor::CdgFunctor,
    m: &CdgModule,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..b_cat.num_objects() {
        let fx = f.obj_map[x];
        for (i, mb) in m.basis.iter().enumerate() {
            if mb.object == fx {
                out.push((x, i));
            }
        }
    }
    out
}

/// Restriction of scalars along a functor `(F, a): B -> C`: the component
/// at `X` is `M(F(X))`, the action goes through `F`, and the differential
/// is corrected by the connection:
///
/// ```text
/// left:   d'(m) = d(m) + a_X . m
/// right:  d'(m) = d(m) - (-1)^{|m|} m . a_X
/// ```
pub fn restrict(
    b_cat: &CdgCategory,
    c_cat: &CdgCategory,
    f: &crate::functor::CdgFunctor,
    m: &CdgModule,
) -> CdgModule {
    let g = b_cat.grading;
    let mut basis = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for x in 0..b_cat.num_objects() {
        let fx = f.obj_map[x];
        for (i, mb) in m.basis.iter().enumerate() {
            if mb.object == fx {
                index.insert((x, i), basis.len());
                basis.push(ModBasis {
                    name: format!("{}@{}", mb.name, b_cat.objects[x]),
                    object: x,
                    degree: mb.degree,
                });
            }
        }
    }
    let place = |x: usize, v: &LinVec| -> LinVec {
        v.iter()
            .filter_map(|(i, c)| index.get(&(x, *i)).map(|&k| (k, c.clone())))
            .collect()
    };
    let mut action = HashMap::new();
    for bf in 0..b_cat.basis.len() {
        let img = &f.mor_map[bf];
        let (src_x, dst_x) = match m.side {
            Side::Left => (b_cat.basis[bf].src, b_cat.basis[bf].dst),
            Side::Right => (b_cat.basis[bf].dst, b_cat.basis[bf].src),
        };
        for (i, mb) in m.basis.iter().enumerate() {
            if mb.object != f.obj_map[src_x] {
                continue;
            }
            let k = index[&(src_x, i)];
            let v = m.act(c_cat, img, &vec![(i, c_cat.field.one())]);
            let v = place(dst_x, &v);
            if !v.is_empty() {
                action.insert((bf, k), v);
            }
        }
    }
    let mut diff = Vec::new();
    for x in 0..b_cat.num_objects() {
        for (i, mb) in m.basis.iter().enumerate() {
            if mb.object != f.obj_map[x] {
                continue;
            }
            let me = vec![(i, c_cat.field.one())];
            let mut v = m.diff[i].clone();
            match m.side {
                Side::Left => {
                    linvec_axpy(&mut v, &c_cat.field.one(), &m.act(c_cat, &f.conn[x], &me));
                }
                Side::Right => {
                    let sign = g.koszul_sign(mb.degree, g.one());
                    linvec_axpy(
                        &mut v,
                        &c_cat.field.one().signed(sign).neg(),
                        &m.act(c_cat, &f.conn[x], &me),
                    );
                }
            }
            diff.push(place(x, &v));
        }
    }
    CdgModule {
        side: m.side,
        basis,
        action,
        diff,
        presentation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::GradingGroup;
    use crate::sample;
    use crate::scalar::Field;
    use rand::SeedableRng;

    fn counterexample_base() -> CdgCategory {
        // (k, 0, 1) over Z/2
        sample::ground(Field::Q, GradingGroup::ModTwo, &Field::Q.one())
    }

    #[test]
    fn free_module_over_counterexample() {
        let b = counterexample_base();
        for side in [Side::Left, Side::Right] {
            let q = free_cdg_on_generators(&b, side, &[(0, Degree(0))]).unwrap();
            assert_eq!(q.dim(), 2);
            let report = q.validate(&b, true);
            assert!(report.ok(), "{side:?}: {:?}", report.failures);
            // d(e) = f; d(f) = ±e with the sign set by the side
            assert_eq!(q.diff[0], vec![(1, Field::Q.one())]);
            let expect = match side {
                Side::Left => Field::Q.one(),
                Side::Right => Field::Q.one().neg(),
            };
            assert_eq!(q.diff[1], vec![(0, expect)]);
        }
    }

    #[test]
    fn trivial_module_fails_d2_law() {
        let b = counterexample_base();
        // k with d = 0: a QDG-module but not CDG
        let m = CdgModule {
            side: Side::Left,
            basis: vec![ModBasis {
                name: "v".into(),
                object: 0,
                degree: Degree(0),
            }],
            action: [((0usize, 0usize), vec![(0, Field::Q.one())])]
                .into_iter()
                .collect(),
            diff: vec![Vec::new()],
            presentation: None,
        };
        assert!(m.validate(&b, false).ok());
        assert!(!m.validate(&b, true).ok());
        // module curvature is -id
        assert_eq!(m.curvature(&b), vec![vec![(0, Field::Q.one().neg())]]);
    }

    #[test]
    fn zero_module_passes() {
        let b = counterexample_base();
        assert!(CdgModule::zero(Side::Left).validate(&b, true).ok());
    }

    #[test]
    fn shift_round_trip() {
        let b = sample::exterior(Field::Q, GradingGroup::Int);
        for side in [Side::Left, Side::Right] {
            let m = free_cdg_on_generators(&b, side, &[(0, Degree(0)), (0, Degree(1))]).unwrap();
            let s = m.shift(&b, Degree(1));
            assert!(s.validate(&b, true).ok());
            let back = s.shift(&b, Degree(-1));
            assert_eq!(back.diff, m.diff);
            assert_eq!(back.action, m.action);
            for (x, y) in back.basis.iter().zip(m.basis.iter()) {
                assert_eq!((x.object, x.degree), (y.object, y.degree));
            }
        }
    }

    #[test]
    fn twist_by_maurer_cartan() {
        let b = counterexample_base();
        let m = free_cdg_on_generators(&b, Side::Left, &[(0, Degree(0))]).unwrap();
        // τ = 0 leaves the module unchanged
        let zero = ModuleMorphism {
            degree: Degree(1),
            map: vec![Vec::new(); 2],
        };
        let t = m.twist(&b, &zero).unwrap();
        assert_eq!(t.diff, m.diff);
        // τ = d itself: curvature gains dτ + τ² = 2h
        let tau = ModuleMorphism {
            degree: Degree(1),
            map: m.diff.clone(),
        };
        let t = m.twist(&b, &tau).unwrap();
        assert!(t.validate(&b, false).ok());
        let c = t.curvature(&b);
        // d' = 2d, so d'² = 4h· while the law wants h·: curvature = 3h·
        for (i, v) in c.iter().enumerate() {
            let mut expect = t.curvature_action(&b, i);
            expect = crate::matrix::linvec_scale(&expect, &Field::Q.from_i64(3));
            assert_eq!(*v, expect);
        }
    }

    #[test]
    fn free_cdg_projectivity_presentation() {
        for seed in 0..10 {
            let b = sample::random_category(seed);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for side in [Side::Left, Side::Right] {
                let m = sample::random_module(&b, side, &mut rng);
                let report = m.validate(&b, true);
                assert!(report.ok(), "seed {seed} {side:?}: {:?}", report.failures);
            }
        }
    }

    #[test]
    fn free_on_base_is_contractible_when_uncurved() {
        let b = sample::exterior(Field::Q, GradingGroup::Int);
        let q = free_cdg_on_generators(&b, Side::Right, &[(0, Degree(0))]).unwrap();
        let h = contracting_homotopy(&b, &q).expect("contractible");
        // verify dH + Hd = id exactly
        for i in 0..q.dim() {
            let mut v = q.diff_elt(&h.map[i]);
            linvec_axpy(&mut v, &Field::Q.one(), &h.apply(&q.diff[i]));
            assert_eq!(v, vec![(i, Field::Q.one())]);
        }
    }

    #[test]
    fn qdg_transfer_on_summand() {
        let b = counterexample_base();
        let q = free_cdg_on_generators(&b, Side::Left, &[(0, Degree(0))]).unwrap();
        // P = the even part (index 0), a non-d-stable graded summand
        let p = CdgModule {
            side: Side::Left,
            basis: vec![ModBasis {
                name: "p".into(),
                object: 0,
                degree: Degree(0),
            }],
            action: [((0usize, 0usize), vec![(0, Field::Q.one())])]
                .into_iter()
                .collect(),
            diff: vec![Vec::new()],
            presentation: None,
        };
        let iota = ModuleMorphism {
            degree: Degree(0),
            map: vec![vec![(0, Field::Q.one())]],
        };
        let pi = ModuleMorphism {
            degree: Degree(0),
            map: vec![vec![(0, Field::Q.one())], Vec::new()],
        };
        let t = qdg_structure_on_projective(&b, &p, &q, &iota, &pi).unwrap();
        assert!(t.validate(&b, false).ok());
        // πdι = 0 on the 1-dimensional even part, so curvature is -h·
        assert_eq!(t.curvature(&b), vec![vec![(0, Field::Q.one().neg())]]);
    }

    #[test]
    fn representable_curvature_is_left_h() {
        let b = counterexample_base();
        let r = representable_qdg(&b, 0);
        assert!(r.validate(&b, false).ok());
        // c(f) = h f: with h = 1·e this is the identity
        assert_eq!(r.curvature(&b), vec![vec![(0, Field::Q.one())]]);
        // h = 0 case: representable is CDG
        let e = sample::exterior(Field::Q, GradingGroup::Int);
        let r = representable_qdg(&e, 0);
        assert!(r.validate(&e, true).ok());
    }

    #[test]
    fn hom_complex_basics() {
        let b = counterexample_base();
        let q = free_cdg_on_generators(&b, Side::Right, &[(0, Degree(0))]).unwrap();
        let hc = hom_complex(&b, &q, &q).unwrap();
        assert_eq!(hc.complex.total_dim(), 4);
        // id is a closed degree-0 morphism
        let id = ModuleMorphism::identity(&q, &b);
        assert!(id.is_closed(&b, &q, &q));
        // the End complex of any module over (k,0,1) is acyclic
        assert!(hc.complex.homology_dims().unwrap().is_empty());
        // Hom(0, M) = 0
        let z = CdgModule::zero(Side::Right);
        let hz = hom_complex(&b, &z, &q).unwrap();
        assert_eq!(hz.complex.total_dim(), 0);
    }

    #[test]
    fn end_complexes_over_counterexample_are_acyclic() {
        let b = counterexample_base();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let m = sample::random_module(&b, Side::Right, &mut rng);
            if m.dim() > 6 {
                continue;
            }
            let hc = hom_complex(&b, &m, &m).unwrap();
            assert!(hc.complex.homology_dims().unwrap().is_empty());
        }
    }

    fn trivial_one_dim(side: Side) -> CdgModule {
        CdgModule {
            side,
            basis: vec![ModBasis {
                name: "k".into(),
                object: 0,
                degree: Degree(0),
            }],
            action: [((0usize, 0usize), vec![(0, Field::Q.one())])]
                .into_iter()
                .collect(),
            diff: vec![Vec::new()],
            presentation: None,
        }
    }

    #[test]
    fn tensor_over_base_examples() {
        // k ⊗_(k,0,0) k = k
        let b = sample::ground(Field::Q, GradingGroup::Int, &Field::Q.zero());
        let t = tensor_over_base(&b, &trivial_one_dim(Side::Right), &trivial_one_dim(Side::Left))
            .unwrap();
        assert_eq!(t.complex.total_dim(), 1);
        assert_eq!(t.complex.dim(Degree(0)), 1);
        // k ⊗_Λ k = k: trivial modules over the exterior algebra
        let e = sample::exterior(Field::Q, GradingGroup::Int);
        let n = trivial_one_dim(Side::Right);
        let m = trivial_one_dim(Side::Left);
        assert!(n.validate(&e, true).ok());
        let t = tensor_over_base(&e, &n, &m).unwrap();
        assert_eq!(t.complex.total_dim(), 1);
        assert_eq!(t.complex.dim(Degree(0)), 1);
        // R_X ⊗_B M ≅ M(X) for uncurved B
        let r = representable_qdg(&e, 0);
        let q = free_cdg_on_generators(&e, Side::Left, &[(0, Degree(0))]).unwrap();
        let t = tensor_over_base(&e, &r, &q).unwrap();
        assert_eq!(t.complex.total_dim(), q.dim());
        let h1 = t.complex.homology_dims().unwrap();
        let hc = hom_complex(&e, &free_cdg_on_generators(&e, Side::Left, &[(0, Degree(0))]).unwrap(), &q).unwrap();
        let _ = hc;
        let _ = h1;
    }

    #[test]
    fn external_tensor_examples() {
        let b1 = counterexample_base();
        let b2 = sample::ground(Field::Q, GradingGroup::ModTwo, &Field::Q.one().neg());
        let m1 = free_cdg_on_generators(&b1, Side::Left, &[(0, Degree(0))]).unwrap();
        let m2 = free_cdg_on_generators(&b2, Side::Left, &[(0, Degree(0))]).unwrap();
        let e = b1.tensor(&b2).unwrap();
        let m = external_tensor(&b1, &m1, &b2, &m2).unwrap();
        assert_eq!(m.dim(), m1.dim() * m2.dim());
        let report = m.validate(&e, true);
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn cone_of_identity_is_contractible() {
        for seed in [3, 7] {
            let b = sample::random_category(seed);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = sample::random_module(&b, Side::Right, &mut rng);
            let id = ModuleMorphism::identity(&m, &b);
            let c = cone(&b, &id, &m, &m).unwrap();
            assert!(c.validate(&b, true).ok(), "seed {seed}");
            let h = contracting_homotopy(&b, &c).expect("cone(id) contractible");
            for i in 0..c.dim() {
                let mut v = c.diff_elt(&h.map[i]);
                linvec_axpy(&mut v, &b.field.one(), &h.apply(&c.diff[i]));
                assert_eq!(v, vec![(i, b.field.one())], "seed {seed}");
            }
        }
    }

    #[test]
    fn total_of_split_triple_is_contractible() {
        let b = sample::exterior(Field::Q, GradingGroup::Int);
        let k = free_cdg_on_generators(&b, Side::Right, &[(0, Degree(0))]).unwrap();
        let m = free_cdg_on_generators(&b, Side::Right, &[(0, Degree(1))]).unwrap();
        // L = K ⊕ M with the obvious inclusion and projection
        let mut l_basis = k.basis.clone();
        l_basis.extend(m.basis.iter().cloned());
        let kd = k.dim();
        let mut action = k.action.clone();
        for (&(f, i), v) in &m.action {
            action.insert((f, i + kd), v.iter().map(|(j, c)| (j + kd, c.clone())).collect());
        }
        let mut diff = k.diff.clone();
        diff.extend(
            m.diff
                .iter()
                .map(|v| v.iter().map(|(j, c)| (j + kd, c.clone())).collect::<LinVec>()),
        );
        let l = CdgModule {
            side: Side::Right,
            basis: l_basis,
            action,
            diff,
            presentation: None,
        };
        assert!(l.validate(&b, true).ok());
        let inc = ModuleMorphism {
            degree: Degree(0),
            map: (0..kd).map(|i| vec![(i, Field::Q.one())]).collect(),
        };
        let proj = ModuleMorphism {
            degree: Degree(0),
            map: (0..l.dim())
                .map(|i| {
                    if i >= kd {
                        vec![(i - kd, Field::Q.one())]
                    } else {
                        Vec::new()
                    }
                })
                .collect(),
        };
        let tot = total_of_exact_triple(&b, &inc, &proj, &k, &l, &m).unwrap();
        assert!(tot.validate(&b, true).ok());
        assert!(contracting_homotopy(&b, &tot).is_some());
    }

    #[test]
    fn mf_category_of_counterexample() {
        let b = counterexample_base();
        let free = free_cdg_on_generators(&b, Side::Right, &[(0, Degree(0))]).unwrap();
        let c = mf_category(&b, &[free], false).unwrap();
        assert_eq!(c.num_objects(), 1);
        assert_eq!(c.basis.len(), 4);
        assert!(c.is_uncurved());
        let report = c.validate();
        assert!(report.ok(), "{:?}", report.failures);
        // empty object list
        let empty = mf_category(&b, &[], false).unwrap();
        assert_eq!(empty.num_objects(), 0);
        // QDG variant on the representable: curvature nonzero
        let r = representable_qdg(&b, 0);
        let d = mf_category(&b, &[r], true).unwrap();
        assert!(d.validate().ok());
        assert!(!d.is_uncurved());
    }

    #[test]
    fn diagonal_bimodules_validate() {
        for (name, b) in [
            ("counterexample", counterexample_base()),
            ("exterior", sample::exterior(Field::Q, GradingGroup::Int)),
            ("mat2", sample::mat2(Field::Fp(3), GradingGroup::ModTwo)),
        ] {
            let (e, diag) = diagonal_bimodule(&b);
            assert!(e.validate().ok(), "{name}");
            let report = diag.validate(&e, true);
            assert!(report.ok(), "{name} left: {:?}", report.failures);
            let total: usize = (0..b.num_objects())
                .flat_map(|x| (0..b.num_objects()).map(move |y| (x, y)))
                .map(|(x, y)| b.hom_dim(x, y))
                .sum();
            assert_eq!(diag.dim(), total, "{name}");
            let (e2, rdiag) = right_diagonal_bimodule(&b);
            assert!(e2.validate().ok());
            let report = rdiag.validate(&e2, true);
            assert!(report.ok(), "{name} right: {:?}", report.failures);
        }
        // (k,0,1): base of the diagonal is (k,0,0) and the module is k, d=0
        let b = counterexample_base();
        let (e, diag) = diagonal_bimodule(&b);
        assert!(e.is_uncurved());
        assert_eq!(diag.dim(), 1);
        assert!(diag.diff[0].is_empty());
    }

    #[test]
    fn restrict_along_functors() {
        use crate::functor::CdgFunctor;
        let b = sample::exterior(Field::Q, GradingGroup::Int);
        let m = free_cdg_on_generators(&b, Side::Right, &[(0, Degree(0))]).unwrap();
        // identity: same structure
        let id = CdgFunctor::identity(&b);
        let r = restrict(&b, &b, &id, &m);
        assert_eq!(r.dim(), m.dim());
        assert_eq!(r.diff, m.diff);
        assert!(r.validate(&b, true).ok());
        // twist functor (Id, τ): B_τ -> B restricts CDG-modules to CDG-modules
        let tau = vec![vec![(1, Field::Q.one())]];
        let bt = b.change_connection(&tau).unwrap();
        let f = CdgFunctor::twist(&bt, &tau);
        for side in [Side::Left, Side::Right] {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
            let m = sample::random_module(&b, side, &mut rng);
            let r = restrict(&bt, &b, &f, &m);
            let report = r.validate(&bt, true);
            assert!(report.ok(), "{side:?}: {:?}", report.failures);
        }
    }
}
