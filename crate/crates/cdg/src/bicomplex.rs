//! Curved bicomplexes: the explicit bar, cobar, and Hochschild complexes
//! of a CDG-category, materialized up to a weight truncation.
//!
//! A curved bicomplex has weight components 0..=T and three operators:
//! the simplicial part `del` (∂, merging tensor slots), the internal
//! differential `d` (weight-preserving), and the curvature insertion
//! `delta` (δ).  The five weightwise identities
//!
//! ```text
//! ∂² = 0   ∂d + d∂ = 0   d² + ∂δ + δ∂ = 0   dδ + δd = 0   δ² = 0
//! ```
//!
//! are the weight components of `(∂ + d + δ)² = 0`.  In particular `d`
//! alone does not square to zero over a curved base; the failure is
//! exactly `−(∂δ + δ∂)`.
//!
//! Orientation fixes how weight enters the total degree: homological
//! complexes (bar, Hochschild homology) put weight `i` in total degree
//! `g − i`, cohomological ones (cobar, Hochschild cohomology) in `g + i`.
//! Truncation drops weights above `T`; identities and square-zero are
//! asserted only where every contributing map is materialized.

use std::collections::{BTreeSet, HashMap};

use crate::category::{CdgCategory, ValidationReport};
use crate::complex::FiniteComplex;
use crate::error::{CdgError, Result};
use crate::functor::{opposite_functor, tensor_functor, CdgFunctor};
use crate::grading::{Degree, GradingGroup};
use crate::matrix::{linvec_normalize, linvec_scale, LinVec, SparseMatrix};
use crate::module::{restrict, restrict_index, CdgModule, Side};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Weights count negatively into the total degree (bar-type).
    Homological,
    /// Weights count positively into the total degree (cobar-type).
    Cohomological,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TotalizationMode {
    DirectSum,
    DirectProduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BicomplexKind {
    Bar,
    Cobar,
    HochschildHomology,
    HochschildCohomology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HochschildVariant {
    Homology,
    Cohomology,
}

/// Basis bookkeeping for one weight component.  Words are index tuples
/// whose meaning depends on the builder (bar: `[n, b_1.., m]`; Hochschild
/// homology: `[m, b_1..]`; cobar: `[b_1.., l, m]`; Hochschild cohomology:
/// `[b_1.., m]`).  Enumeration is lexicographic in the index tuple, which
/// refines the (object path, basis path) order.
#[derive(Clone, Debug, Default)]
pub struct Layout {
    pub words: Vec<Vec<usize>>,
    pub degrees: Vec<Degree>,
    pub index: HashMap<Vec<usize>, usize>,
}

impl Layout {
    fn new(words: Vec<Vec<usize>>, degrees: Vec<Degree>) -> Layout {
        let index = words
            .iter()
            .enumerate()
            .map(|(k, w)| (w.clone(), k))
            .collect();
        Layout {
            words,
            degrees,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }
}

#[derive(Clone, Debug)]
pub struct CurvedBicomplex {
    pub field: Field,
    pub grading: GradingGroup,
    pub orientation: Orientation,
    pub kind: BicomplexKind,
    pub truncation: usize,
    pub layouts: Vec<Layout>,
    /// Simplicial part ∂.  Homological: weight `i -> i−1`; cohomological:
    /// `i -> i+1` (entry at the truncation is an unmaterialized stub).
    pub del: Vec<SparseMatrix>,
    /// Internal differential, weight-preserving.
    pub d: Vec<SparseMatrix>,
    /// Curvature insertion δ.  Homological: `i -> i+1` (stub at the
    /// truncation); cohomological: `i -> i−1`.
    pub delta: Vec<SparseMatrix>,
    pub reduced: bool,
}

impl CurvedBicomplex {
    pub fn dims(&self, i: usize) -> usize {
        self.layouts[i].dim()
    }

    /// The operator lowering the weight index (toward 0).  Materialized at
    /// every weight; at weight 0 it is the zero map into nothing.
    pub fn toward(&self, i: usize) -> &SparseMatrix {
        match self.orientation {
            Orientation::Homological => &self.del[i],
            Orientation::Cohomological => &self.delta[i],
        }
    }

    /// The operator raising the weight index (away from 0), or `None` at
    /// the truncation boundary where its target is not materialized.
    pub fn away(&self, i: usize) -> Option<&SparseMatrix> {
        if i >= self.truncation {
            return None;
        }
        match self.orientation {
            Orientation::Homological => Some(&self.delta[i]),
            Orientation::Cohomological => Some(&self.del[i]),
        }
    }

    /// Check the five weightwise identities on all weights where every
    /// contributing map is materialized.
    pub fn check_identities(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let t = self.truncation;
        let zero_or = |m: Result<SparseMatrix>| m.expect("shape mismatch in bicomplex");
        // toward² = 0
        for i in 2..=t {
            let p = zero_or(self.toward(i - 1).mul(self.toward(i)));
            if !p.is_zero() {
                failures.push(format!("toward^2 != 0 at weight {i}"));
            }
        }
        // d·toward + toward·d = 0
        for i in 1..=t {
            let a = zero_or(self.d[i - 1].mul(self.toward(i)));
            let b = zero_or(self.toward(i).mul(&self.d[i]));
            if !zero_or(a.add(&b)).is_zero() {
                failures.push(format!("d.toward + toward.d != 0 at weight {i}"));
            }
        }
        // d² + (away then toward) + (toward then away) = 0
        for i in 0..t {
            let mut acc = zero_or(self.d[i].mul(&self.d[i]));
            let away_i = self.away(i).expect("materialized below truncation");
            acc = zero_or(acc.add(&zero_or(self.toward(i + 1).mul(away_i))));
            if i >= 1 {
                let away_prev = self.away(i - 1).expect("materialized");
                acc = zero_or(acc.add(&zero_or(away_prev.mul(self.toward(i)))));
            }
            if !acc.is_zero() {
                failures.push(format!("d^2 + del.delta + delta.del != 0 at weight {i}"));
            }
        }
        // d·away + away·d = 0
        for i in 0..t {
            let away_i = self.away(i).expect("materialized");
            let a = zero_or(self.d[i + 1].mul(away_i));
            let b = zero_or(away_i.mul(&self.d[i]));
            if !zero_or(a.add(&b)).is_zero() {
                failures.push(format!("d.away + away.d != 0 at weight {i}"));
            }
        }
        // away² = 0
        for i in 0..t.saturating_sub(1) {
            let a = self.away(i).expect("materialized");
            let b = self.away(i + 1).expect("materialized");
            if !zero_or(b.mul(a)).is_zero() {
                failures.push(format!("away^2 != 0 at weight {i}"));
            }
        }
        ValidationReport { failures }
    }

    /// Total degree of a weight-`i` element of internal degree `g`.
    pub fn total_degree(&self, i: usize, g: Degree) -> Degree {
        let shift = match self.orientation {
            Orientation::Homological => -(i as i64),
            Orientation::Cohomological => i as i64,
        };
        self.grading.add(g, self.grading.embed_int(shift))
    }
}

// ---------------------------------------------------------------------------
// sign functions

/// The sign exponent ρ(j_0..j_i; t_0..t_i) mod 2 governing pushforward
/// insertions:
///
/// ```text
/// ρ = (J−1)J/2 + j_0(i+1) + j_1 i + … + j_i·1
///     + j_0 t_0 + j_1(t_0+t_1) + … + j_i(t_0+…+t_i),   J = Σ j_k.
/// ```
pub fn sign_rho(js: &[usize], ts: &[u8]) -> Result<u8> {
    if js.len() != ts.len() || js.is_empty() {
        return Err(CdgError::Invalid(
            "sign_rho needs equally long nonempty j and t lists".into(),
        ));
    }
    let i = js.len() - 1;
    let total: usize = js.iter().sum();
    let mut acc = if total == 0 { 0 } else { (total - 1) * total / 2 };
    let mut tsum: usize = 0;
    for (k, (&j, &t)) in js.iter().zip(ts.iter()).enumerate() {
        tsum += t as usize;
        acc += j * (i + 1 - k) + j * tsum;
    }
    Ok((acc % 2) as u8)
}

/// The sign exponent λ(j_0..j_i; t_0..t_i) mod 2 governing pullback
/// insertions:
///
/// ```text
/// λ = j_0 i + j_1(i−1) + … + j_{i−1}·1
///     + j_0 t_0 + j_1(t_0+t_1) + … + j_i(t_0+…+t_i).
/// ```
pub fn sign_lambda(js: &[usize], ts: &[u8]) -> Result<u8> {
    if js.len() != ts.len() || js.is_empty() {
        return Err(CdgError::Invalid(
            "sign_lambda needs equally long nonempty j and t lists".into(),
        ));
    }
    let i = js.len() - 1;
    let mut acc = 0usize;
    let mut tsum: usize = 0;
    for (k, (&j, &t)) in js.iter().zip(ts.iter()).enumerate() {
        tsum += t as usize;
        if k < i {
            acc += j * (i - k);
        }
        acc += j * tsum;
    }
    Ok((acc % 2) as u8)
}

// ---------------------------------------------------------------------------
// word enumeration

/// All composable chains `(b_1..b_len)` with `dst(b_1) = start`, in
/// lexicographic order of basis indices.
fn chains_from(cat: &CdgCategory, start: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for b in 0..cat.basis.len() {
        if cat.basis[b].dst != start {
            continue;
        }
        for rest in chains_from(cat, cat.basis[b].src, len - 1) {
            let mut w = Vec::with_capacity(len);
            w.push(b);
            w.extend(rest);
            out.push(w);
        }
    }
    out
}

/// All composable chains of length `len` with free start object.
fn chains_all(cat: &CdgCategory, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for b in 0..cat.basis.len() {
        for rest in chains_from(cat, cat.basis[b].src, len - 1) {
            let mut w = Vec::with_capacity(len);
            w.push(b);
            w.extend(rest);
            out.push(w);
        }
    }
    out
}

fn chain_end(cat: &CdgCategory, start: usize, chain: &[usize]) -> usize {
    chain.last().map(|&b| cat.basis[b].src).unwrap_or(start)
}

/// Cartesian expansion of a sequence of sparse slots into pure words.
fn expand_slots(slots: &[LinVec], field: Field) -> Vec<(Vec<usize>, Scalar)> {
    let mut acc: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), field.one())];
    for slot in slots {
        let mut next = Vec::new();
        for (word, c) in &acc {
            for (i, ci) in slot {
                let mut w = word.clone();
                w.push(*i);
                next.push((w, c.mul(ci)));
            }
        }
        acc = next;
    }
    acc
}

fn build_matrix(rows: usize, cols: Vec<LinVec>) -> SparseMatrix {
    let cols: Vec<LinVec> = cols.into_iter().map(linvec_normalize).collect();
    SparseMatrix::from_columns(rows, &cols)
}

// ---------------------------------------------------------------------------
// bar bicomplex

fn bar_layout(
    cat: &CdgCategory,
    n: &CdgModule,
    m: &CdgModule,
    i: usize,
) -> Layout {
    let g = cat.grading;
    let mut words = Vec::new();
    let mut degrees = Vec::new();
    for ni in 0..n.dim() {
        let x0 = n.basis[ni].object;
        for chain in chains_from(cat, x0, i) {
            let end = chain_end(cat, x0, &chain);
            for mi in 0..m.dim() {
                if m.basis[mi].object != end {
                    continue;
                }
                let mut deg = g.add(n.basis[ni].degree, m.basis[mi].degree);
                for &b in &chain {
                    deg = g.add(deg, cat.degree(b));
                }
                let mut w = Vec::with_capacity(i + 2);
                w.push(ni);
                w.extend(&chain);
                w.push(mi);
                words.push(w);
                degrees.push(deg);
            }
        }
    }
    Layout::new(words, degrees)
}

/// The bar bicomplex `Br(N, B, M)` of a right module `N` and a left
/// module `M`, truncated at weight `T`.  Weight `i` is spanned by the
/// tensor words `n ⊗ b_1 ⊗ … ⊗ b_i ⊗ m` over composable chains.
pub fn bar_bicomplex(
    cat: &CdgCategory,
    n: &CdgModule,
    m: &CdgModule,
    t: usize,
) -> Result<CurvedBicomplex> {
    if n.side != Side::Right || m.side != Side::Left {
        return Err(CdgError::Incompatible(
            "bar bicomplex needs a right module and a left module".into(),
        ));
    }
    let g = cat.grading;
    let one = cat.field.one();
    let layouts: Vec<Layout> = (0..=t).map(|i| bar_layout(cat, n, m, i)).collect();

    let mut del = vec![SparseMatrix::zero(0, layouts[0].dim())];
    for i in 1..=t {
        let (src, dst) = (&layouts[i], &layouts[i - 1]);
        let mut cols = Vec::with_capacity(src.dim());
        for w in &src.words {
            let (ni, bs, mi) = (w[0], &w[1..=i], w[i + 1]);
            let mut col: LinVec = Vec::new();
            // merge n with b_1
            if let Some(nb) = n.act_basis(cat, bs[0], ni) {
                for (n2, c) in nb {
                    let mut w2 = Vec::with_capacity(i + 1);
                    w2.push(n2);
                    w2.extend(&bs[1..]);
                    w2.push(mi);
                    col.push((dst.index[&w2], c));
                }
            }
            // merge b_j with b_{j+1}
            for j in 1..i {
                let prod = cat.compose_basis(bs[j - 1], bs[j]).unwrap_or_default();
                let sign = one.signed(if j % 2 == 0 { 1 } else { -1 });
                for (p, c) in prod {
                    let mut w2 = Vec::with_capacity(i + 1);
                    w2.push(ni);
                    w2.extend(&bs[..j - 1]);
                    w2.push(p);
                    w2.extend(&bs[j + 1..]);
                    w2.push(mi);
                    col.push((dst.index[&w2], c.mul(&sign)));
                }
            }
            // merge b_i with m
            if let Some(bm) = m.act_basis(cat, bs[i - 1], mi) {
                let sign = one.signed(if i % 2 == 0 { 1 } else { -1 });
                for (m2, c) in bm {
                    let mut w2 = Vec::with_capacity(i + 1);
                    w2.push(ni);
                    w2.extend(&bs[..i - 1]);
                    w2.push(m2);
                    col.push((dst.index[&w2], c.mul(&sign)));
                }
            }
            cols.push(col);
        }
        del.push(build_matrix(dst.dim(), cols));
    }

    let mut d = Vec::with_capacity(t + 1);
    for i in 0..=t {
        let lay = &layouts[i];
        let mut cols = Vec::with_capacity(lay.dim());
        for w in &lay.words {
            let (ni, bs, mi) = (w[0], &w[1..=i], w[i + 1]);
            let mut col: LinVec = Vec::new();
            let global = if i % 2 == 0 { 1i8 } else { -1i8 };
            let mut prefix = 0u8;
            for pos in 0..i + 2 {
                let (dv, deg): (LinVec, Degree) = if pos == 0 {
                    (n.diff[ni].clone(), n.basis[ni].degree)
                } else if pos <= i {
                    (cat.diff[bs[pos - 1]].clone(), cat.degree(bs[pos - 1]))
                } else {
                    (m.diff[mi].clone(), m.basis[mi].degree)
                };
                let sign = if prefix % 2 == 0 { global } else { -global };
                let sc = one.signed(sign);
                for (r, c) in dv {
                    let mut w2 = w.clone();
                    w2[pos] = r;
                    col.push((lay.index[&w2], c.mul(&sc)));
                }
                prefix = (prefix + g.parity(deg)) % 2;
            }
            cols.push(col);
        }
        d.push(build_matrix(lay.dim(), cols));
    }

    let mut delta = Vec::with_capacity(t + 1);
    for i in 0..=t {
        if i == t {
            delta.push(SparseMatrix::zero(0, layouts[t].dim()));
            break;
        }
        let (src, dst) = (&layouts[i], &layouts[i + 1]);
        let mut cols = Vec::with_capacity(src.dim());
        for w in &src.words {
            let (ni, bs) = (w[0], &w[1..=i]);
            let mut col: LinVec = Vec::new();
            for s in 0..=i {
                let obj = if s == 0 {
                    n.basis[ni].object
                } else {
                    cat.basis[bs[s - 1]].src
                };
                let sign = one.signed(if s % 2 == 0 { 1 } else { -1 });
                for (hb, c) in cat.curvature_of(obj) {
                    let mut w2 = w.clone();
                    w2.insert(s + 1, hb);
                    col.push((dst.index[&w2], c.mul(&sign)));
                }
            }
            cols.push(col);
        }
        delta.push(build_matrix(dst.dim(), cols));
    }

    Ok(CurvedBicomplex {
        field: cat.field,
        grading: g,
        orientation: Orientation::Homological,
        kind: BicomplexKind::Bar,
        truncation: t,
        layouts,
        del,
        d,
        delta,
        reduced: false,
    })
}

// ---------------------------------------------------------------------------
// Hochschild homology bicomplex

/// Left action `(b ⊗ id) . m` of the base on a module over
/// `E = B ⊗ B^op`.
fn e_left_act(
    e: &CdgCategory,
    cat: &CdgCategory,
    m: &CdgModule,
    b: usize,
    mi: usize,
) -> LinVec {
    let nobj = cat.num_objects();
    let nb = cat.basis.len();
    let y = m.basis[mi].object % nobj;
    let elt: LinVec = linvec_normalize(
        cat.identity(y)
            .iter()
            .map(|(u, c)| (b * nb + u, c.clone()))
            .collect(),
    );
    m.act(e, &elt, &vec![(mi, cat.field.one())])
}

/// Right action `m . b = (−1)^{σ(|b|,|m|)} (id ⊗ b^op) . m`.
fn e_right_act(
    e: &CdgCategory,
    cat: &CdgCategory,
    m: &CdgModule,
    b: usize,
    mi: usize,
) -> LinVec {
    let nobj = cat.num_objects();
    let nb = cat.basis.len();
    let x = m.basis[mi].object / nobj;
    let elt: LinVec = linvec_normalize(
        cat.identity(x)
            .iter()
            .map(|(u, c)| (u * nb + b, c.clone()))
            .collect(),
    );
    let sign = cat
        .grading
        .koszul_sign(cat.degree(b), m.basis[mi].degree);
    linvec_scale(
        &m.act(e, &elt, &vec![(mi, cat.field.one())]),
        &cat.field.one().signed(sign),
    )
}

fn hoch_homology_layout(cat: &CdgCategory, m: &CdgModule, i: usize) -> Layout {
    let g = cat.grading;
    let nobj = cat.num_objects();
    let mut words = Vec::new();
    let mut degrees = Vec::new();
    for mi in 0..m.dim() {
        let obj = m.basis[mi].object;
        let (xi, x0) = (obj / nobj, obj % nobj);
        for chain in chains_from(cat, x0, i) {
            if chain_end(cat, x0, &chain) != xi {
                continue;
            }
            let mut deg = m.basis[mi].degree;
            for &b in &chain {
                deg = g.add(deg, cat.degree(b));
            }
            let mut w = Vec::with_capacity(i + 1);
            w.push(mi);
            w.extend(&chain);
            words.push(w);
            degrees.push(deg);
        }
    }
    Layout::new(words, degrees)
}

fn hochschild_homology_bicomplex(
    cat: &CdgCategory,
    e: &CdgCategory,
    m: &CdgModule,
    t: usize,
) -> Result<CurvedBicomplex> {
    let g = cat.grading;
    let one = cat.field.one();
    let layouts: Vec<Layout> = (0..=t)
        .map(|i| hoch_homology_layout(cat, m, i))
        .collect();

    let mut del = vec![SparseMatrix::zero(0, layouts[0].dim())];
    for i in 1..=t {
        let (src, dst) = (&layouts[i], &layouts[i - 1]);
        let mut cols = Vec::with_capacity(src.dim());
        for w in &src.words {
            let (mi, bs) = (w[0], &w[1..=i]);
            let mut col: LinVec = Vec::new();
            // merge m with b_1 through the right action
            for (m2, c) in e_right_act(e, cat, m, bs[0], mi) {
                let mut w2 = Vec::with_capacity(i);
                w2.push(m2);
                w2.extend(&bs[1..]);
                col.push((dst.index[&w2], c));
            }
            // merge b_j with b_{j+1}
            for j in 1..i {
                let prod = cat.compose_basis(bs[j - 1], bs[j]).unwrap_or_default();
                let sign = one.signed(if j % 2 == 0 { 1 } else { -1 });
                for (p, c) in prod {
                    let mut w2 = Vec::with_capacity(i);
                    w2.push(mi);
                    w2.extend(&bs[..j - 1]);
                    w2.push(p);
                    w2.extend(&bs[j + 1..]);
                    col.push((dst.index[&w2], c.mul(&sign)));
                }
            }
            // cyclic term: b_i acts on m from the left
            let mut mid = m.basis[mi].degree;
            for &b in &bs[..i - 1] {
                mid = g.add(mid, cat.degree(b));
            }
            let exp = (i as u8 + g.sigma(cat.degree(bs[i - 1]), mid)) % 2;
            let sign = one.signed(if exp == 0 { 1 } else { -1 });
            for (m2, c) in e_left_act(e, cat, m, bs[i - 1], mi) {
                let mut w2 = Vec::with_capacity(i);
                w2.push(m2);
                w2.extend(&bs[..i - 1]);
                col.push((dst.index[&w2], c.mul(&sign)));
            }
            cols.push(col);
        }
        del.push(build_matrix(dst.dim(), cols));
    }

    let mut d = Vec::with_capacity(t + 1);
    for i in 0..=t {
        let lay = &layouts[i];
        let mut cols = Vec::with_capacity(lay.dim());
        for w in &lay.words {
            let (mi, bs) = (w[0], &w[1..=i]);
            let mut col: LinVec = Vec::new();
            let global = if i % 2 == 0 { 1i8 } else { -1i8 };
            let mut prefix = 0u8;
            for pos in 0..i + 1 {
                let (dv, deg): (LinVec, Degree) = if pos == 0 {
                    (m.diff[mi].clone(), m.basis[mi].degree)
                } else {
                    (cat.diff[bs[pos - 1]].clone(), cat.degree(bs[pos - 1]))
                };
                let sign = if prefix % 2 == 0 { global } else { -global };
                let sc = one.signed(sign);
                for (r, c) in dv {
                    let mut w2 = w.clone();
                    w2[pos] = r;
                    col.push((lay.index[&w2], c.mul(&sc)));
                }
                prefix = (prefix + g.parity(deg)) % 2;
            }
            cols.push(col);
        }
        d.push(build_matrix(lay.dim(), cols));
    }

    let nobj = cat.num_objects();
    let mut delta = Vec::with_capacity(t + 1);
    for i in 0..=t {
        if i == t {
            delta.push(SparseMatrix::zero(0, layouts[t].dim()));
            break;
        }
        let (src, dst) = (&layouts[i], &layouts[i + 1]);
        let mut cols = Vec::with_capacity(src.dim());
        for w in &src.words {
            let (mi, bs) = (w[0], &w[1..=i]);
            let mut col: LinVec = Vec::new();
            for s in 0..=i {
                let obj = if s == 0 {
                    m.basis[mi].object % nobj
                } else {
                    cat.basis[bs[s - 1]].src
                };
                let sign = one.signed(if s % 2 == 0 { 1 } else { -1 });
                for (hb, c) in cat.curvature_of(obj) {
                    let mut w2 = w.clone();
                    w2.insert(s + 1, hb);
                    col.push((dst.index[&w2], c.mul(&sign)));
                }
            }
            cols.push(col);
        }
        delta.push(build_matrix(dst.dim(), cols));
    }

    Ok(CurvedBicomplex {
        field: cat.field,
        grading: g,
        orientation: Orientation::Homological,
        kind: BicomplexKind::HochschildHomology,
        truncation: t,
        layouts,
        del,
        d,
        delta,
        reduced: false,
    })
}

// ---------------------------------------------------------------------------
// cobar bicomplex

/// Co-composition tables: for each basis morphism `p`, the pairs whose
/// product contains `p`, and the elements whose differential contains `p`.
struct CoTables {
    comul: Vec<Vec<(usize, usize, Scalar)>>,
    codiff: Vec<Vec<(usize, Scalar)>>,
}

fn co_tables(cat: &CdgCategory) -> CoTables {
    let nb = cat.basis.len();
    let mut comul = vec![Vec::new(); nb];
    for (&(f, gg), v) in &cat.compose {
        for (p, c) in v {
            comul[*p].push((f, gg, c.clone()));
        }
    }
    for row in &mut comul {
        row.sort_by_key(|&(f, gg, _)| (f, gg));
    }
    let mut codiff = vec![Vec::new(); nb];
    for (u, dv) in cat.diff.iter().enumerate() {
        for (p, c) in dv {
            codiff[*p].push((u, c.clone()));
        }
    }
    CoTables { comul, codiff }
}

/// Module co-action: for each module basis `p`, the pairs `(f, m)` with
/// `f.m` (resp. `m.f`) containing `p`.
fn co_action(m: &CdgModule) -> Vec<Vec<(usize, usize, Scalar)>> {
    let mut out = vec![Vec::new(); m.dim()];
    for (&(f, mi), v) in &m.action {
        for (p, c) in v {
            out[*p].push((f, mi, c.clone()));
        }
    }
    for row in &mut out {
        row.sort_by_key(|&(f, mi, _)| (f, mi));
    }
    out
}

fn co_diff(m: &CdgModule) -> Vec<Vec<(usize, Scalar)>> {
    let mut out = vec![Vec::new(); m.dim()];
    for (mi, dv) in m.diff.iter().enumerate() {
        for (p, c) in dv {
            out[*p].push((mi, c.clone()));
        }
    }
    out
}

fn cobar_layout(
    cat: &CdgCategory,
    l: &CdgModule,
    m: &CdgModule,
    i: usize,
) -> Layout {
    let g = cat.grading;
    let mut words = Vec::new();
    let mut degrees = Vec::new();
    for chain in chains_all(cat, i) {
        for li in 0..l.dim() {
            if i > 0 && l.basis[li].object != chain_end(cat, 0, &chain) {
                continue;
            }
            let x0 = if i > 0 {
                cat.basis[chain[0]].dst
            } else {
                l.basis[li].object
            };
            for mi in 0..m.dim() {
                if m.basis[mi].object != x0 {
                    continue;
                }
                let mut deg = g.sub(m.basis[mi].degree, l.basis[li].degree);
                for &b in &chain {
                    deg = g.sub(deg, cat.degree(b));
                }
                let mut w = Vec::with_capacity(i + 2);
                w.extend(&chain);
                w.push(li);
                w.push(mi);
                words.push(w);
                degrees.push(deg);
            }
        }
    }
    Layout::new(words, degrees)
}

/// The cobar bicomplex `Cb(L, B, M)` of two left modules, truncated at
/// weight `T`.  Weight `i` is spanned by the dual-basis functionals
/// `(b_1 ⊗ … ⊗ b_i ⊗ l) ↦ m`.
pub fn cobar_bicomplex(
    cat: &CdgCategory,
    l: &CdgModule,
    m: &CdgModule,
    t: usize,
) -> Result<CurvedBicomplex> {
    if l.side != Side::Left || m.side != Side::Left {
        return Err(CdgError::Incompatible(
            "cobar bicomplex needs two left modules".into(),
        ));
    }
    let g = cat.grading;
    let one = cat.field.one();
    let layouts: Vec<Layout> = (0..=t).map(|i| cobar_layout(cat, l, m, i)).collect();
    let tables = co_tables(cat);
    let l_coact = co_action(l);
    let l_codiff = co_diff(l);

    // ∂: weight i -> i+1 (stub at the truncation)
    let mut del = Vec::with_capacity(t + 1);
    for i in 0..=t {
        if i == t {
            del.push(SparseMatrix::zero(0, layouts[t].dim()));
            break;
        }
        let (src, dst) = (&layouts[i], &layouts[i + 1]);
        let mut cols = Vec::with_capacity(src.dim());
        for (k, w) in src.words.iter().enumerate() {
            let (bs, li, mi) = (&w[..i], w[i], w[i + 1]);
            let deg_f = src.degrees[k];
            let mut col: LinVec = Vec::new();
            // b_1 acts on the output value
            for b1 in 0..cat.basis.len() {
                if cat.basis[b1].src != m.basis[mi].object {
                    continue;
                }
                let sign = one.signed(g.koszul_sign(deg_f, cat.degree(b1)));
                if let Some(bm) = m.act_basis(cat, b1, mi) {
                    for (m2, c) in bm {
                        let mut w2 = Vec::with_capacity(i + 3);
                        w2.push(b1);
                        w2.extend(bs);
                        w2.push(li);
                        w2.push(m2);
                        col.push((dst.index[&w2], c.mul(&sign)));
                    }
                }
            }
            // split slot j into a product
            for j in 1..=i {
                let sign = one.signed(if j % 2 == 0 { 1 } else { -1 });
                for (u, v, c) in &tables.comul[bs[j - 1]] {
                    let mut w2 = Vec::with_capacity(i + 3);
                    w2.extend(&bs[..j - 1]);
                    w2.push(*u);
                    w2.push(*v);
                    w2.extend(&bs[j..]);
                    w2.push(li);
                    w2.push(mi);
                    col.push((dst.index[&w2], c.mul(&sign)));
                }
            }
            // split the module argument into an action
            let sign = one.signed(if (i + 1) % 2 == 0 { 1 } else { -1 });
            for (u, l2, c) in &l_coact[li] {
                let mut w2 = Vec::with_capacity(i + 3);
                w2.extend(bs);
                w2.push(*u);
                w2.push(*l2);
                w2.push(mi);
                col.push((dst.index[&w2], c.mul(&sign)));
            }
            cols.push(col);
        }
        del.push(build_matrix(dst.dim(), cols));
    }

    let mut d = Vec::with_capacity(t + 1);
    for i in 0..=t {
        let lay = &layouts[i];
        let mut cols = Vec::with_capacity(lay.dim());
        for (k, w) in lay.words.iter().enumerate() {
            let (bs, li, mi) = (&w[..i], w[i], w[i + 1]);
            let deg_f = lay.degrees[k];
            let mut col: LinVec = Vec::new();
            let global = if i % 2 == 0 { 1i8 } else { -1i8 };
            // differential of the output value
            for (m2, c) in &m.diff[mi] {
                let mut w2 = w.clone();
                w2[i + 1] = *m2;
                col.push((lay.index[&w2], c.mul(&one.signed(global))));
            }
            // differential absorbed by slot j
            let mut prefix = g.parity(deg_f);
            for j in 1..=i {
                let sign = if prefix % 2 == 0 { -global } else { global };
                let sc = one.signed(sign);
                for (u, c) in &tables.codiff[bs[j - 1]] {
                    let mut w2 = w.clone();
                    w2[j - 1] = *u;
                    col.push((lay.index[&w2], c.mul(&sc)));
                }
                prefix = (prefix + g.parity(cat.degree(bs[j - 1]))) % 2;
            }
            // differential absorbed by the module argument
            let sign = if prefix % 2 == 0 { -global } else { global };
            let sc = one.signed(sign);
            for (l2, c) in &l_codiff[li] {
                let mut w2 = w.clone();
                w2[i] = *l2;
                col.push((lay.index[&w2], c.mul(&sc)));
            }
            cols.push(col);
        }
        d.push(build_matrix(lay.dim(), cols));
    }

    // δ: weight i -> i−1
    let mut delta = vec![SparseMatrix::zero(0, layouts[0].dim())];
    for i in 1..=t {
        let (src, dst) = (&layouts[i], &layouts[i - 1]);
        let mut cols = Vec::with_capacity(src.dim());
        for w in &src.words {
            let bs = &w[..i];
            let mut col: LinVec = Vec::new();
            for s in 1..=i {
                let b = bs[s - 1];
                if cat.basis[b].src != cat.basis[b].dst {
                    continue;
                }
                let h = cat.curvature_of(cat.basis[b].src);
                let Some(c) = crate::matrix::linvec_get(&h, b) else { continue };
                let sign = one.signed(if s % 2 == 0 { 1 } else { -1 });
                let mut w2 = Vec::with_capacity(i + 1);
                w2.extend(&bs[..s - 1]);
                w2.extend(&bs[s..]);
                w2.push(w[i]);
                w2.push(w[i + 1]);
                col.push((dst.index[&w2], c.mul(&sign)));
            }
            cols.push(col);
        }
        delta.push(build_matrix(dst.dim(), cols));
    }

    Ok(CurvedBicomplex {
        field: cat.field,
        grading: g,
        orientation: Orientation::Cohomological,
        kind: BicomplexKind::Cobar,
        truncation: t,
        layouts,
        del,
        d,
        delta,
        reduced: false,
    })
}

// ---------------------------------------------------------------------------
// Hochschild cohomology bicomplex

fn hoch_cohomology_layout(cat: &CdgCategory, m: &CdgModule, i: usize) -> Layout {
    let g = cat.grading;
    let nobj = cat.num_objects();
    let mut words = Vec::new();
    let mut degrees = Vec::new();
    if i == 0 {
        for mi in 0..m.dim() {
            let obj = m.basis[mi].object;
            if obj / nobj == obj % nobj {
                words.push(vec![mi]);
                degrees.push(m.basis[mi].degree);
            }
        }
        return Layout::new(words, degrees);
    }
    for chain in chains_all(cat, i) {
        let x0 = cat.basis[chain[0]].dst;
        let xi = chain_end(cat, x0, &chain);
        for mi in 0..m.dim() {
            if m.basis[mi].object != x0 * nobj + xi {
                continue;
            }
            let mut deg = m.basis[mi].degree;
            for &b in &chain {
                deg = g.sub(deg, cat.degree(b));
            }
            let mut w = Vec::with_capacity(i + 1);
            w.extend(&chain);
            w.push(mi);
            words.push(w);
            degrees.push(deg);
        }
    }
    Layout::new(words, degrees)
}

fn hochschild_cohomology_bicomplex(
    cat: &CdgCategory,
    e: &CdgCategory,
    m: &CdgModule,
    t: usize,
) -> Result<CurvedBicomplex> {
    let g = cat.grading;
    let one = cat.field.one();
    let nobj = cat.num_objects();
    let layouts: Vec<Layout> = (0..=t)
        .map(|i| hoch_cohomology_layout(cat, m, i))
        .collect();
    let tables = co_tables(cat);

    let mut del = Vec::with_capacity(t + 1);
    for i in 0..=t {
        if i == t {
            del.push(SparseMatrix::zero(0, layouts[t].dim()));
            break;
        }
        let (src, dst) = (&layouts[i], &layouts[i + 1]);
        let mut cols = Vec::with_capacity(src.dim());
        for (k, w) in src.words.iter().enumerate() {
            let (bs, mi) = (&w[..i], w[i]);
            let deg_f = src.degrees[k];
            let obj = m.basis[mi].object;
            let (x0, xi) = (obj / nobj, obj % nobj);
            let mut col: LinVec = Vec::new();
            // b_1 acts on the output value from the left
            for b1 in 0..cat.basis.len() {
                if cat.basis[b1].src != x0 {
                    continue;
                }
                let sign = one.signed(g.koszul_sign(deg_f, cat.degree(b1)));
                for (m2, c) in e_left_act(e, cat, m, b1, mi) {
                    let mut w2 = Vec::with_capacity(i + 2);
                    w2.push(b1);
                    w2.extend(bs);
                    w2.push(m2);
                    col.push((dst.index[&w2], c.mul(&sign)));
                }
            }
            // split slot j into a product
            for j in 1..=i {
                let sign = one.signed(if j % 2 == 0 { 1 } else { -1 });
                for (u, v, c) in &tables.comul[bs[j - 1]] {
                    let mut w2 = Vec::with_capacity(i + 2);
                    w2.extend(&bs[..j - 1]);
                    w2.push(*u);
                    w2.push(*v);
                    w2.extend(&bs[j..]);
                    w2.push(mi);
                    col.push((dst.index[&w2], c.mul(&sign)));
                }
            }
            // b_{i+1} acts on the output value from the right
            let sign = one.signed(if (i + 1) % 2 == 0 { 1 } else { -1 });
            for b in 0..cat.basis.len() {
                if cat.basis[b].dst != xi {
                    continue;
                }
                for (m2, c) in e_right_act(e, cat, m, b, mi) {
                    let mut w2 = Vec::with_capacity(i + 2);
                    w2.extend(bs);
                    w2.push(b);
                    w2.push(m2);
                    col.push((dst.index[&w2], c.mul(&sign)));
                }
            }
            cols.push(col);
        }
        del.push(build_matrix(dst.dim(), cols));
    }

    let mut d = Vec::with_capacity(t + 1);
    for i in 0..=t {
        let lay = &layouts[i];
        let mut cols = Vec::with_capacity(lay.dim());
        for (k, w) in lay.words.iter().enumerate() {
            let (bs, mi) = (&w[..i], w[i]);
            let deg_f = lay.degrees[k];
            let mut col: LinVec = Vec::new();
            let global = if i % 2 == 0 { 1i8 } else { -1i8 };
            for (m2, c) in &m.diff[mi] {
                let mut w2 = w.clone();
                w2[i] = *m2;
                col.push((lay.index[&w2], c.mul(&one.signed(global))));
            }
            let mut prefix = g.parity(deg_f);
            for j in 1..=i {
                let sign = if prefix % 2 == 0 { -global } else { global };
                let sc = one.signed(sign);
                for (u, c) in &tables.codiff[bs[j - 1]] {
                    let mut w2 = w.clone();
                    w2[j - 1] = *u;
                    col.push((lay.index[&w2], c.mul(&sc)));
                }
                prefix = (prefix + g.parity(cat.degree(bs[j - 1]))) % 2;
            }
            cols.push(col);
        }
        d.push(build_matrix(lay.dim(), cols));
    }

    let mut delta = vec![SparseMatrix::zero(0, layouts[0].dim())];
    for i in 1..=t {
        let (src, dst) = (&layouts[i], &layouts[i - 1]);
        let mut cols = Vec::with_capacity(src.dim());
        for w in &src.words {
            let bs = &w[..i];
            let mut col: LinVec = Vec::new();
            for s in 1..=i {
                let b = bs[s - 1];
                if cat.basis[b].src != cat.basis[b].dst {
                    continue;
                }
                let h = cat.curvature_of(cat.basis[b].src);
                let Some(c) = crate::matrix::linvec_get(&h, b) else { continue };
                let sign = one.signed(if s % 2 == 0 { 1 } else { -1 });
                let mut w2 = Vec::with_capacity(i);
                w2.extend(&bs[..s - 1]);
                w2.extend(&bs[s..]);
                w2.push(w[i]);
                col.push((dst.index[&w2], c.mul(&sign)));
            }
            cols.push(col);
        }
        delta.push(build_matrix(dst.dim(), cols));
    }

    Ok(CurvedBicomplex {
        field: cat.field,
        grading: g,
        orientation: Orientation::Cohomological,
        kind: BicomplexKind::HochschildCohomology,
        truncation: t,
        layouts,
        del,
        d,
        delta,
        reduced: false,
    })
}

/// The Hochschild bicomplex of `B` with coefficients in a left module `M`
/// over `E = B ⊗ B^op` (the diagonal bimodule being the default
/// coefficient choice made by the engines).
pub fn hochschild_bicomplex(
    cat: &CdgCategory,
    m: &CdgModule,
    variant: HochschildVariant,
    t: usize,
) -> Result<CurvedBicomplex> {
    if m.side != Side::Left {
        return Err(CdgError::Incompatible(
            "hochschild bicomplex expects a left module over B ⊗ B^op".into(),
        ));
    }
    let e = cat.tensor(&cat.opposite())?;
    let nsq = cat.num_objects() * cat.num_objects();
    if m.basis.iter().any(|b| b.object >= nsq) {
        return Err(CdgError::Incompatible(
            "coefficient module does not live over B ⊗ B^op".into(),
        ));
    }
    match variant {
        HochschildVariant::Homology => hochschild_homology_bicomplex(cat, &e, m, t),
        HochschildVariant::Cohomology => hochschild_cohomology_bicomplex(cat, &e, m, t),
    }
}

// ---------------------------------------------------------------------------
// totalization

#[derive(Clone, Debug)]
pub struct Totalization {
    pub complex: FiniteComplex,
    pub mode: TotalizationMode,
    pub truncation: usize,
    /// `pos[weight][word] = (total degree, position inside the component)`.
    pub pos: Vec<Vec<(Degree, usize)>>,
    /// Total degrees whose homology may change if the truncation grows.
    pub boundary_degrees: BTreeSet<i64>,
}

/// Collapse the bicomplex along diagonals.  At a finite truncation the
/// direct-sum and direct-product totalizations agree; the mode is recorded
/// for reporting.  The total differential is `∂ + d + δ`; it squares to
/// zero on columns of weight below the truncation (see
/// [`Totalization::check_square_zero_interior`]).
pub fn totalize(bc: &CurvedBicomplex, mode: TotalizationMode) -> Totalization {
    let g = bc.grading;
    let t = bc.truncation;
    let mut complex = FiniteComplex::new(bc.field, g);
    let mut pos: Vec<Vec<(Degree, usize)>> = Vec::with_capacity(t + 1);
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for i in 0..=t {
        let lay = &bc.layouts[i];
        let mut p = Vec::with_capacity(lay.dim());
        for k in 0..lay.dim() {
            let td = bc.total_degree(i, lay.degrees[k]);
            let slot = counts.entry(td.0).or_insert(0);
            p.push((td, *slot));
            *slot += 1;
        }
        pos.push(p);
    }
    for (&deg, &n) in &counts {
        complex.set_dim(Degree(deg), n);
    }
    // assemble per-degree differentials
    let mut columns: HashMap<i64, Vec<LinVec>> = counts
        .iter()
        .map(|(&deg, &n)| (deg, vec![LinVec::new(); n]))
        .collect();
    let mut scatter = |src_w: usize, dst_w: usize, mat: &SparseMatrix| {
        for (r, c, v) in &mat.entries {
            let (dsrc, psrc) = pos[src_w][*c];
            let (ddst, pdst) = pos[dst_w][*r];
            debug_assert_eq!(ddst, g.add(dsrc, g.one()));
            let _ = ddst;
            columns.get_mut(&dsrc.0).unwrap()[psrc].push((pdst, v.clone()));
        }
    };
    for i in 0..=t {
        scatter(i, i, &bc.d[i]);
        match bc.orientation {
            Orientation::Homological => {
                if i >= 1 {
                    scatter(i, i - 1, &bc.del[i]);
                }
                if i < t {
                    scatter(i, i + 1, &bc.delta[i]);
                }
            }
            Orientation::Cohomological => {
                if i < t {
                    scatter(i, i + 1, &bc.del[i]);
                }
                if i >= 1 {
                    scatter(i, i - 1, &bc.delta[i]);
                }
            }
        }
    }
    for (deg, cols) in columns {
        let target = complex.dim(g.add(Degree(deg), g.one()));
        let cols: Vec<LinVec> = cols
            .into_iter()
            .map(|mut c| {
                // entries target the degree-(deg+1) component
                c = linvec_normalize(c);
                c
            })
            .collect();
        complex
            .set_map(Degree(deg), SparseMatrix::from_columns(target, &cols))
            .expect("consistent dimensions");
    }
    let mut boundary_degrees = BTreeSet::new();
    for k in 0..bc.layouts[t].dim() {
        let td = bc.total_degree(t, bc.layouts[t].degrees[k]);
        for off in -1..=1 {
            boundary_degrees.insert(g.add(td, g.embed_int(off)).0);
        }
    }
    Totalization {
        complex,
        mode,
        truncation: t,
        pos,
        boundary_degrees,
    }
}

impl Totalization {
    /// Verify `D² = 0` on every column coming from a weight below the
    /// truncation (the only place truncation can break square-zero).
    pub fn check_square_zero_interior(&self, bc: &CurvedBicomplex) -> Result<()> {
        let g = bc.grading;
        for i in 0..bc.truncation {
            for k in 0..bc.layouts[i].dim() {
                let (deg, p) = self.pos[i][k];
                let col = self.complex.map(deg).column(p);
                let twice = self.complex.map(g.add(deg, g.one())).apply(&col);
                if !twice.is_empty() {
                    return Err(CdgError::Invalid(format!(
                        "total differential does not square to zero on weight {i}, word {k}"
                    )));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// functoriality maps

/// A weight-bigraded morphism between two curved bicomplexes of the same
/// orientation (the truncated pushforward `F_*` or pullback `F^*`).
pub struct BicomplexMorphism {
    pub source: CurvedBicomplex,
    pub target: CurvedBicomplex,
    /// `blocks[(w, v)]`: component from source weight `w` to target
    /// weight `v`.
    pub blocks: HashMap<(usize, usize), SparseMatrix>,
}

impl BicomplexMorphism {
    pub fn block(&self, w: usize, v: usize) -> SparseMatrix {
        if w > self.source.truncation || v > self.target.truncation {
            return SparseMatrix::zero(0, 0);
        }
        self.blocks
            .get(&(w, v))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.target.dims(v), self.source.dims(w)))
    }

    /// Verify the chain-map property `D_target ∘ F = F ∘ D_source`
    /// blockwise, away from the truncation boundary: for homological
    /// orientation the target weight stays below the truncation, for
    /// cohomological orientation the source weight does.
    pub fn check_chain_map(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let ts = self.source.truncation;
        let tt = self.target.truncation;
        let or = self.source.orientation;
        let (w_max, v_max) = match or {
            Orientation::Homological => (ts, tt.saturating_sub(1)),
            Orientation::Cohomological => (ts.saturating_sub(1), tt),
        };
        for w in 0..=w_max {
            for v in 0..=v_max {
                let mut lhs = self.target.d[v]
                    .mul(&self.block(w, v))
                    .expect("shapes");
                let mut rhs = self
                    .block(w, v)
                    .mul(&self.source.d[w])
                    .expect("shapes");
                // target-side toward and away routes
                if v + 1 <= tt {
                    let m = self.target.toward(v + 1).mul(&self.block(w, v + 1)).expect("shapes");
                    lhs = lhs.add(&m).expect("shapes");
                }
                if v >= 1 {
                    if let Some(a) = self.target.away(v - 1) {
                        let m = a.mul(&self.block(w, v - 1)).expect("shapes");
                        lhs = lhs.add(&m).expect("shapes");
                    }
                }
                // source-side routes
                if w >= 1 {
                    let m = self.block(w - 1, v).mul(self.source.toward(w)).expect("shapes");
                    rhs = rhs.add(&m).expect("shapes");
                }
                if let Some(a) = self.source.away(w) {
                    let m = self.block(w + 1, v).mul(a).expect("shapes");
                    rhs = rhs.add(&m).expect("shapes");
                }
                let diff = lhs
                    .add(&rhs.scale(&self.source.field.one().neg()))
                    .expect("shapes");
                if !diff.is_zero() {
                    failures.push(format!("chain map fails on block ({w} -> {v})"));
                }
            }
        }
        ValidationReport { failures }
    }

    /// Collapse to a degree-indexed morphism of total complexes.
    pub fn totalized(
        &self,
        src_tot: &Totalization,
        dst_tot: &Totalization,
    ) -> TotalMorphism {
        let g = self.source.grading;
        let mut columns: HashMap<i64, Vec<LinVec>> = HashMap::new();
        for (deg, &n) in &src_tot.complex.dims {
            columns.insert(*deg, vec![LinVec::new(); n]);
        }
        for (&(w, v), mat) in &self.blocks {
            for (r, c, val) in &mat.entries {
                let (dsrc, psrc) = src_tot.pos[w][*c];
                let (ddst, pdst) = dst_tot.pos[v][*r];
                debug_assert_eq!(dsrc, ddst);
                let _ = ddst;
                columns.get_mut(&dsrc.0).unwrap()[psrc].push((pdst, val.clone()));
            }
        }
        let mut blocks = std::collections::BTreeMap::new();
        for (deg, cols) in columns {
            let cols: Vec<LinVec> = cols.into_iter().map(linvec_normalize).collect();
            let rows = dst_tot.complex.dim(Degree(deg));
            blocks.insert(deg, SparseMatrix::from_columns(rows, &cols));
        }
        let _ = g;
        TotalMorphism { blocks }
    }
}

/// A degree-indexed morphism of totalized complexes.
pub struct TotalMorphism {
    pub blocks: std::collections::BTreeMap<i64, SparseMatrix>,
}

/// Enumerate the compositions `(j_0..j_parts-1)` with sum at most `max`.
fn insertion_tuples(parts: usize, max: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for j in 0..=max {
        for rest in insertion_tuples(parts - 1, max - j) {
            let mut v = Vec::with_capacity(parts);
            v.push(j);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

fn require_cdg(f: &CdgFunctor, src: &CdgCategory, dst: &CdgCategory) -> Result<()> {
    if !f.is_cdg(src, dst) {
        return Err(CdgError::Invalid(
            "functoriality maps need a CDG-functor; this one has nonzero functor curvature"
                .into(),
        ));
    }
    Ok(())
}

/// Shared core of the two pushforward maps: expand a source word with all
/// connection insertions up to the target truncation.
struct PushContext<'a> {
    f: &'a CdgFunctor,
    c_cat: &'a CdgCategory,
    t: usize,
}

impl<'a> PushContext<'a> {
    /// All insertion-expanded images of a chain `bs` with slot objects
    /// `objs` (length `i+1`: insertion object `k` sits after tensor factor
    /// `k`), with sign exponents from `ts`.
    fn expanded(
        &self,
        bs: &[usize],
        objs: &[usize],
        ts: &[u8],
        rho: bool,
    ) -> Vec<(Vec<usize>, Scalar)> {
        let i = bs.len();
        let field = self.c_cat.field;
        let mut out = Vec::new();
        for js in insertion_tuples(i + 1, self.t.saturating_sub(i)) {
            if js
                .iter()
                .enumerate()
                .any(|(k, &j)| j > 0 && self.f.conn[objs[k]].is_empty())
            {
                continue;
            }
            let exp = if rho {
                sign_rho(&js, ts).expect("equal lengths")
            } else {
                sign_lambda(&js, ts).expect("equal lengths")
            };
            let sign = field.one().signed(if exp == 0 { 1 } else { -1 });
            let mut slots: Vec<LinVec> = Vec::new();
            for _ in 0..js[0] {
                slots.push(self.f.conn[objs[0]].clone());
            }
            for (k, &b) in bs.iter().enumerate() {
                slots.push(self.f.mor_map[b].clone());
                for _ in 0..js[k + 1] {
                    slots.push(self.f.conn[objs[k + 1]].clone());
                }
            }
            for (word, c) in expand_slots(&slots, field) {
                out.push((word, c.mul(&sign)));
            }
        }
        out
    }
}

/// The pushforward `F_*: Br(F^*N, B, F^*M) -> Br(N, C, M)` of bar
/// bicomplexes along a CDG-functor `(F, a): B -> C`, with all connection
/// insertions up to the truncation.
pub fn pushforward_bar(
    b_cat: &CdgCategory,
    c_cat: &CdgCategory,
    f: &CdgFunctor,
    n: &CdgModule,
    m: &CdgModule,
    t: usize,
) -> Result<BicomplexMorphism> {
    require_cdg(f, b_cat, c_cat)?;
    let n_b = restrict(b_cat, c_cat, f, n);
    let m_b = restrict(b_cat, c_cat, f, m);
    let idx_n = restrict_index(b_cat, f, n);
    let idx_m = restrict_index(b_cat, f, m);
    let source = bar_bicomplex(b_cat, &n_b, &m_b, t)?;
    let target = bar_bicomplex(c_cat, n, m, t)?;
    let g = b_cat.grading;
    let ctx = PushContext { f, c_cat, t };

    let mut blocks: HashMap<(usize, usize), Vec<LinVec>> = HashMap::new();
    for i in 0..=t {
        let lay = &source.layouts[i];
        for (k, w) in lay.words.iter().enumerate() {
            let (nr, bs, mr) = (w[0], &w[1..=i], w[i + 1]);
            let (x0, nu) = idx_n[nr];
            let (_, mu) = idx_m[mr];
            let mut objs = Vec::with_capacity(i + 1);
            objs.push(x0);
            for &b in bs {
                objs.push(b_cat.basis[b].src);
            }
            let mut ts = Vec::with_capacity(i + 1);
            ts.push(g.parity(n_b.basis[nr].degree));
            for &b in bs {
                ts.push(g.parity(b_cat.degree(b)));
            }
            for (mid, c) in ctx.expanded(bs, &objs, &ts, true) {
                let weight = mid.len();
                let mut word = Vec::with_capacity(weight + 2);
                word.push(nu);
                word.extend(&mid);
                word.push(mu);
                let Some(&row) = target.layouts[weight].index.get(&word) else {
                    continue;
                };
                let cols = blocks.entry((i, weight)).or_insert_with(|| {
                    vec![LinVec::new(); lay.dim()]
                });
                cols[k].push((row, c));
            }
        }
    }
    let blocks = blocks
        .into_iter()
        .map(|((w, v), cols)| ((w, v), build_matrix(target.dims(v), cols)))
        .collect();
    Ok(BicomplexMorphism {
        source,
        target,
        blocks,
    })
}

/// The pushforward `F_*: Hoch(B, F^*M) -> Hoch(C, M)` of homological
/// Hochschild bicomplexes, where `F^*M` restricts along `F ⊗ F^op`.
pub fn pushforward_hochschild(
    b_cat: &CdgCategory,
    c_cat: &CdgCategory,
    f: &CdgFunctor,
    m: &CdgModule,
    t: usize,
) -> Result<BicomplexMorphism> {
    require_cdg(f, b_cat, c_cat)?;
    let b_op = b_cat.opposite();
    let c_op = c_cat.opposite();
    let e_b = b_cat.tensor(&b_op)?;
    let e_c = c_cat.tensor(&c_op)?;
    let fop = opposite_functor(f, &c_op);
    let ff = tensor_functor(f, &fop, b_cat, &b_op, c_cat, &c_op);
    let m_b = restrict(&e_b, &e_c, &ff, m);
    let idx_m = restrict_index(&e_b, &ff, m);
    let source = hochschild_bicomplex(b_cat, &m_b, HochschildVariant::Homology, t)?;
    let target = hochschild_bicomplex(c_cat, m, HochschildVariant::Homology, t)?;
    let g = b_cat.grading;
    let nobj = b_cat.num_objects();
    let ctx = PushContext { f, c_cat, t };

    let mut blocks: HashMap<(usize, usize), Vec<LinVec>> = HashMap::new();
    for i in 0..=t {
        let lay = &source.layouts[i];
        for (k, w) in lay.words.iter().enumerate() {
            let (mr, bs) = (w[0], &w[1..=i]);
            let (pair_obj, mu) = idx_m[mr];
            let x0 = pair_obj % nobj;
            let mut objs = Vec::with_capacity(i + 1);
            objs.push(x0);
            for &b in bs {
                objs.push(b_cat.basis[b].src);
            }
            let mut ts = Vec::with_capacity(i + 1);
            ts.push(g.parity(m_b.basis[mr].degree));
            for &b in bs {
                ts.push(g.parity(b_cat.degree(b)));
            }
            for (mid, c) in ctx.expanded(bs, &objs, &ts, true) {
                let weight = mid.len();
                let mut word = Vec::with_capacity(weight + 1);
                word.push(mu);
                word.extend(&mid);
                let Some(&row) = target.layouts[weight].index.get(&word) else {
                    continue;
                };
                let cols = blocks.entry((i, weight)).or_insert_with(|| {
                    vec![LinVec::new(); lay.dim()]
                });
                cols[k].push((row, c));
            }
        }
    }
    let blocks = blocks
        .into_iter()
        .map(|((w, v), cols)| ((w, v), build_matrix(target.dims(v), cols)))
        .collect();
    Ok(BicomplexMorphism {
        source,
        target,
        blocks,
    })
}

/// The pullback `F^*: Cb(L, C, M) -> Cb(F^*L, B, F^*M)` of cobar
/// bicomplexes along a CDG-functor `(F, a): B -> C`.
pub fn pullback_cobar(
    b_cat: &CdgCategory,
    c_cat: &CdgCategory,
    f: &CdgFunctor,
    l: &CdgModule,
    m: &CdgModule,
    t: usize,
) -> Result<BicomplexMorphism> {
    require_cdg(f, b_cat, c_cat)?;
    let l_b = restrict(b_cat, c_cat, f, l);
    let m_b = restrict(b_cat, c_cat, f, m);
    let idx_l = restrict_index(b_cat, f, l);
    let idx_m = restrict_index(b_cat, f, m);
    let source = cobar_bicomplex(c_cat, l, m, t)?;
    let target = cobar_bicomplex(b_cat, &l_b, &m_b, t)?;
    let g = b_cat.grading;

    let mut blocks: HashMap<(usize, usize), Vec<LinVec>> = HashMap::new();
    for i in 0..=t {
        let lay = &target.layouts[i];
        for (row, w) in lay.words.iter().enumerate() {
            let (bs, lr, mr) = (&w[..i], w[i], w[i + 1]);
            let (_, lu) = idx_l[lr];
            let (_, mu) = idx_m[mr];
            // insertion objects after each slot: before F(b_1) at X_0,
            // after F(b_k) at X_k (the last block sits before the module
            // argument)
            let mut objs = Vec::with_capacity(i + 1);
            objs.push(if i > 0 {
                b_cat.basis[bs[0]].dst
            } else {
                l_b.basis[lr].object
            });
            for &b in bs {
                objs.push(b_cat.basis[b].src);
            }
            for js in insertion_tuples(i + 1, t.saturating_sub(i)) {
                if js
                    .iter()
                    .enumerate()
                    .any(|(k, &j)| j > 0 && f.conn[objs[k]].is_empty())
                {
                    continue;
                }
                let weight = i + js.iter().sum::<usize>();
                let mut slots: Vec<LinVec> = Vec::new();
                for _ in 0..js[0] {
                    slots.push(f.conn[objs[0]].clone());
                }
                for (k, &b) in bs.iter().enumerate() {
                    slots.push(f.mor_map[b].clone());
                    for _ in 0..js[k + 1] {
                        slots.push(f.conn[objs[k + 1]].clone());
                    }
                }
                for (mid, c) in expand_slots(&slots, b_cat.field) {
                    let mut word = Vec::with_capacity(weight + 2);
                    word.extend(&mid);
                    word.push(lu);
                    word.push(mu);
                    let Some(&col) = source.layouts[weight].index.get(&word) else {
                        continue;
                    };
                    let mut ts = Vec::with_capacity(i + 1);
                    ts.push(g.parity(source.layouts[weight].degrees[col]));
                    for &b in bs {
                        ts.push(g.parity(b_cat.degree(b)));
                    }
                    let exp = sign_lambda(&js, &ts).expect("equal lengths");
                    let sc = b_cat
                        .field
                        .one()
                        .signed(if exp == 0 { 1 } else { -1 });
                    let cols = blocks.entry((weight, i)).or_insert_with(|| {
                        vec![LinVec::new(); source.dims(weight)]
                    });
                    cols[col].push((row, c.mul(&sc)));
                }
            }
        }
    }
    let blocks = blocks
        .into_iter()
        .map(|((w, v), cols)| ((w, v), build_matrix(target.dims(v), cols)))
        .collect();
    Ok(BicomplexMorphism {
        source,
        target,
        blocks,
    })
}

/// The pullback `F^*: Hoch(C, M) -> Hoch(B, F^*M)` of cohomological
/// Hochschild bicomplexes.
pub fn pullback_hochschild(
    b_cat: &CdgCategory,
    c_cat: &CdgCategory,
    f: &CdgFunctor,
    m: &CdgModule,
    t: usize,
) -> Result<BicomplexMorphism> {
    require_cdg(f, b_cat, c_cat)?;
    let b_op = b_cat.opposite();
    let c_op = c_cat.opposite();
    let e_b = b_cat.tensor(&b_op)?;
    let e_c = c_cat.tensor(&c_op)?;
    let fop = opposite_functor(f, &c_op);
    let ff = tensor_functor(f, &fop, b_cat, &b_op, c_cat, &c_op);
    let m_b = restrict(&e_b, &e_c, &ff, m);
    let idx_m = restrict_index(&e_b, &ff, m);
    let source = hochschild_bicomplex(c_cat, m, HochschildVariant::Cohomology, t)?;
    let target = hochschild_bicomplex(b_cat, &m_b, HochschildVariant::Cohomology, t)?;
    let g = b_cat.grading;
    let nobj = b_cat.num_objects();

    let mut blocks: HashMap<(usize, usize), Vec<LinVec>> = HashMap::new();
    for i in 0..=t {
        let lay = &target.layouts[i];
        for (row, w) in lay.words.iter().enumerate() {
            let (bs, mr) = (&w[..i], w[i]);
            let (pair_obj, mu) = idx_m[mr];
            let mut objs = Vec::with_capacity(i + 1);
            objs.push(if i > 0 {
                b_cat.basis[bs[0]].dst
            } else {
                pair_obj / nobj
            });
            for &b in bs {
                objs.push(b_cat.basis[b].src);
            }
            for js in insertion_tuples(i + 1, t.saturating_sub(i)) {
                if js
                    .iter()
                    .enumerate()
                    .any(|(k, &j)| j > 0 && f.conn[objs[k]].is_empty())
                {
                    continue;
                }
                let weight = i + js.iter().sum::<usize>();
                let mut slots: Vec<LinVec> = Vec::new();
                for _ in 0..js[0] {
                    slots.push(f.conn[objs[0]].clone());
                }
                for (k, &b) in bs.iter().enumerate() {
                    slots.push(f.mor_map[b].clone());
                    for _ in 0..js[k + 1] {
                        slots.push(f.conn[objs[k + 1]].clone());
                    }
                }
                for (mid, c) in expand_slots(&slots, b_cat.field) {
                    let mut word = Vec::with_capacity(weight + 1);
                    word.extend(&mid);
                    word.push(mu);
                    let Some(&col) = source.layouts[weight].index.get(&word) else {
                        continue;
                    };
                    let mut ts = Vec::with_capacity(i + 1);
                    ts.push(g.parity(source.layouts[weight].degrees[col]));
                    for &b in bs {
                        ts.push(g.parity(b_cat.degree(b)));
                    }
                    let exp = sign_lambda(&js, &ts).expect("equal lengths");
                    let sc = b_cat
                        .field
                        .one()
                        .signed(if exp == 0 { 1 } else { -1 });
                    let cols = blocks.entry((weight, i)).or_insert_with(|| {
                        vec![LinVec::new(); source.dims(weight)]
                    });
                    cols[col].push((row, c.mul(&sc)));
                }
            }
        }
    }
    let blocks = blocks
        .into_iter()
        .map(|((w, v), cols)| ((w, v), build_matrix(target.dims(v), cols)))
        .collect();
    Ok(BicomplexMorphism {
        source,
        target,
        blocks,
    })
}

/// The comparison morphism from the direct-sum totalization to the
/// direct-product totalization.  Meaningful for uncurved bases (where
/// first- and second-kind theories both exist); at a finite truncation the
/// two totalizations have identical components and the map is the
/// identity.
pub fn comparison_map(
    bc: &CurvedBicomplex,
) -> Result<(Totalization, Totalization, TotalMorphism)> {
    if bc.delta.iter().any(|m| !m.is_zero()) {
        return Err(CdgError::Unsupported(
            "comparison map needs an uncurved base (zero curvature insertions)".into(),
        ));
    }
    let sum = totalize(bc, TotalizationMode::DirectSum);
    let prod = totalize(bc, TotalizationMode::DirectProduct);
    let mut blocks = std::collections::BTreeMap::new();
    for (&deg, &n) in &sum.complex.dims {
        blocks.insert(deg, SparseMatrix::identity(n, bc.field));
    }
    Ok((sum, prod, TotalMorphism { blocks }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{diagonal_bimodule, free_cdg_on_generators, right_diagonal_bimodule};
    use crate::sample;
    use rand::SeedableRng;

    fn q() -> Field {
        Field::Q
    }

    #[test]
    fn sign_examples() {
        // all insertions zero: both exponents vanish for any parities
        for ts in [vec![0], vec![1], vec![0, 1, 1], vec![1, 0]] {
            let js = vec![0; ts.len()];
            assert_eq!(sign_rho(&js, &ts).unwrap(), 0);
            assert_eq!(sign_lambda(&js, &ts).unwrap(), 0);
        }
        assert_eq!(sign_rho(&[1], &[0]).unwrap(), 1);
        assert_eq!(sign_rho(&[2], &[1]).unwrap(), 1);
        assert_eq!(sign_lambda(&[1, 0], &[0, 0]).unwrap(), 1);
        assert_eq!(sign_lambda(&[5], &[1]).unwrap(), 1);
        assert!(sign_rho(&[1, 2], &[0]).is_err());
    }

    fn free_pair(
        cat: &CdgCategory,
    ) -> (CdgModule, CdgModule) {
        let z = cat.grading.zero();
        let n = free_cdg_on_generators(cat, Side::Right, &[(0, z)]).unwrap();
        let m = free_cdg_on_generators(cat, Side::Left, &[(0, z)]).unwrap();
        (n, m)
    }

    #[test]
    fn bar_dimension_count() {
        let cat = sample::ground(q(), GradingGroup::ModTwo, &q().one());
        let (n, m) = free_pair(&cat);
        let bc = bar_bicomplex(&cat, &n, &m, 4).unwrap();
        for i in 0..=4 {
            assert_eq!(bc.dims(i), n.dim() * cat.basis.len().pow(i as u32) * m.dim());
        }
    }

    #[test]
    fn bar_delta_weight_zero_inserts_curvature() {
        let cat = sample::ground(q(), GradingGroup::ModTwo, &q().one());
        let (n, m) = free_pair(&cat);
        let bc = bar_bicomplex(&cat, &n, &m, 2).unwrap();
        // h = 1 . id, so δ(n ⊗ m) = + n ⊗ id ⊗ m with coefficient one
        for (k, w) in bc.layouts[0].words.iter().enumerate() {
            let col = bc.delta[0].column(k);
            let expected = vec![w[0], 0, w[1]];
            let row = bc.layouts[1].index[&expected];
            assert_eq!(col, vec![(row, q().one())]);
        }
    }

    #[test]
    fn uncurved_base_has_zero_delta() {
        let cat = sample::exterior(q(), GradingGroup::Int);
        let (n, m) = free_pair(&cat);
        let bc = bar_bicomplex(&cat, &n, &m, 3).unwrap();
        assert!(bc.delta.iter().all(|mt| mt.is_zero()));
        let (_, diag) = diagonal_bimodule(&cat);
        let hh = hochschild_bicomplex(&cat, &diag, HochschildVariant::Homology, 3).unwrap();
        assert!(hh.delta.iter().all(|mt| mt.is_zero()));
    }

    fn check_all_builders(cat: &CdgCategory, t: usize, label: &str) {
        let (n, m) = free_pair(cat);
        let l = free_cdg_on_generators(cat, Side::Left, &[(0, cat.grading.one())]).unwrap();
        let bar = bar_bicomplex(cat, &n, &m, t).unwrap();
        let rep = bar.check_identities();
        assert!(rep.ok(), "{label} bar: {:?}", rep.failures);
        let cb = cobar_bicomplex(cat, &l, &m, t).unwrap();
        let rep = cb.check_identities();
        assert!(rep.ok(), "{label} cobar: {:?}", rep.failures);
        let (_, diag) = diagonal_bimodule(cat);
        let hh = hochschild_bicomplex(cat, &diag, HochschildVariant::Homology, t).unwrap();
        let rep = hh.check_identities();
        assert!(rep.ok(), "{label} hochschild homology: {:?}", rep.failures);
        let hc = hochschild_bicomplex(cat, &diag, HochschildVariant::Cohomology, t).unwrap();
        let rep = hc.check_identities();
        assert!(rep.ok(), "{label} hochschild cohomology: {:?}", rep.failures);
    }

    #[test]
    fn identities_on_standard_algebras() {
        for grading in [GradingGroup::Int, GradingGroup::ModTwo] {
            check_all_builders(&sample::exterior(q(), grading), 3, "exterior");
            check_all_builders(&sample::dual_numbers(q(), grading), 3, "dual numbers");
            check_all_builders(&sample::mat2(q(), grading), 3, "mat2");
        }
        check_all_builders(
            &sample::ground(q(), GradingGroup::ModTwo, &q().one()),
            4,
            "curved ground",
        );
        check_all_builders(
            &sample::ground(Field::Fp(5), GradingGroup::ModTwo, &Field::Fp(5).from_i64(2)),
            4,
            "curved ground F5",
        );
    }

    #[test]
    fn identities_on_random_categories_and_modules() {
        for seed in 0..8 {
            let cat = sample::random_category(seed);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x51);
            let n = sample::random_module(&cat, Side::Right, &mut rng);
            let m = sample::random_module(&cat, Side::Left, &mut rng);
            let bar = bar_bicomplex(&cat, &n, &m, 3).unwrap();
            let rep = bar.check_identities();
            assert!(rep.ok(), "seed {seed} bar: {:?}", rep.failures);
            let l = sample::random_module(&cat, Side::Left, &mut rng);
            let cb = cobar_bicomplex(&cat, &l, &m, 3).unwrap();
            let rep = cb.check_identities();
            assert!(rep.ok(), "seed {seed} cobar: {:?}", rep.failures);
            let (_, diag) = diagonal_bimodule(&cat);
            for variant in [HochschildVariant::Homology, HochschildVariant::Cohomology] {
                let hh = hochschild_bicomplex(&cat, &diag, variant, 3).unwrap();
                let rep = hh.check_identities();
                assert!(rep.ok(), "seed {seed} {variant:?}: {:?}", rep.failures);
            }
        }
    }

    #[test]
    fn curvature_cancellation_is_nontrivial() {
        // over a base whose curvature is not a unit multiple, the internal
        // differential of the bar complex does not square to zero; the
        // defect is exactly −(∂δ + δ∂)
        let cat = sample::truncated_poly4(q(), GradingGroup::Int);
        let (n, m) = free_pair(&cat);
        let bc = bar_bicomplex(&cat, &n, &m, 3).unwrap();
        let some_nonzero = (0..=3).any(|i| {
            !bc.d[i].mul(&bc.d[i]).unwrap().is_zero()
        });
        assert!(some_nonzero, "expected d^2 != 0 over a curved base");
        assert!(bc.check_identities().ok());
    }

    #[test]
    fn totalize_weight_zero_only() {
        let cat = sample::exterior(q(), GradingGroup::Int);
        let (n, m) = free_pair(&cat);
        let bc = bar_bicomplex(&cat, &n, &m, 0).unwrap();
        let tot = totalize(&bc, TotalizationMode::DirectSum);
        assert_eq!(
            tot.complex.total_dim(),
            bc.dims(0),
        );
        tot.complex.check_square_zero().unwrap();
    }

    #[test]
    fn totalize_modes_agree_and_square_zero() {
        let cat = sample::exterior(q(), GradingGroup::Int);
        let (n, m) = free_pair(&cat);
        let bc = bar_bicomplex(&cat, &n, &m, 3).unwrap();
        let a = totalize(&bc, TotalizationMode::DirectSum);
        let b = totalize(&bc, TotalizationMode::DirectProduct);
        assert_eq!(a.complex.dims, b.complex.dims);
        for (&deg, _) in &a.complex.dims {
            let d = Degree(deg);
            assert_eq!(a.complex.map(d).entries, b.complex.map(d).entries);
        }
        // uncurved: square-zero everywhere
        a.complex.check_square_zero().unwrap();

        // curved: square-zero away from the truncation boundary
        let cat = sample::ground(q(), GradingGroup::ModTwo, &q().one());
        let (n, m) = free_pair(&cat);
        let bc = bar_bicomplex(&cat, &n, &m, 4).unwrap();
        let tot = totalize(&bc, TotalizationMode::DirectProduct);
        tot.check_square_zero_interior(&bc).unwrap();
    }

    #[test]
    fn strict_pushforward_is_termwise() {
        let cat = sample::mat2(q(), GradingGroup::Int);
        let z = cat.grading.zero();
        let n = free_cdg_on_generators(&cat, Side::Right, &[(0, z)]).unwrap();
        let m = free_cdg_on_generators(&cat, Side::Left, &[(0, z)]).unwrap();
        let f = CdgFunctor::identity(&cat);
        let push = pushforward_bar(&cat, &cat, &f, &n, &m, 3).unwrap();
        // only the weight-preserving blocks survive, and they are identities
        for (&(w, v), mat) in &push.blocks {
            assert_eq!(w, v);
            assert_eq!(*mat, SparseMatrix::identity(push.target.dims(v), q()));
        }
        assert!(push.check_chain_map().ok());
    }

    #[test]
    fn twist_pushforward_and_pullback_are_chain_maps() {
        for seed in 0..6 {
            let cat = sample::random_category(seed);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x99);
            let tau = sample::random_tau(&cat, &mut rng);
            let twisted = cat.change_connection(&tau).unwrap();
            let f = CdgFunctor::twist(&twisted, &tau);
            let n = sample::random_module(&cat, Side::Right, &mut rng);
            let m = sample::random_module(&cat, Side::Left, &mut rng);
            let push = pushforward_bar(&twisted, &cat, &f, &n, &m, 4).unwrap();
            let rep = push.check_chain_map();
            assert!(rep.ok(), "seed {seed} bar push: {:?}", rep.failures);

            let l = sample::random_module(&cat, Side::Left, &mut rng);
            let pull = pullback_cobar(&twisted, &cat, &f, &l, &m, 4).unwrap();
            let rep = pull.check_chain_map();
            assert!(rep.ok(), "seed {seed} cobar pull: {:?}", rep.failures);

            let (_, diag) = diagonal_bimodule(&cat);
            let push = pushforward_hochschild(&twisted, &cat, &f, &diag, 4).unwrap();
            let rep = push.check_chain_map();
            assert!(rep.ok(), "seed {seed} hoch push: {:?}", rep.failures);
            let pull = pullback_hochschild(&twisted, &cat, &f, &diag, 4).unwrap();
            let rep = pull.check_chain_map();
            assert!(rep.ok(), "seed {seed} hoch pull: {:?}", rep.failures);
        }
    }

    #[test]
    fn comparison_map_needs_uncurved_base() {
        let cat = sample::ground(q(), GradingGroup::ModTwo, &q().one());
        let (n, m) = free_pair(&cat);
        let bc = bar_bicomplex(&cat, &n, &m, 2).unwrap();
        assert!(comparison_map(&bc).is_err());

        let cat = sample::exterior(q(), GradingGroup::Int);
        let (n, m) = free_pair(&cat);
        let bc = bar_bicomplex(&cat, &n, &m, 2).unwrap();
        let (sum, prod, map) = comparison_map(&bc).unwrap();
        assert_eq!(sum.complex.dims, prod.complex.dims);
        for (deg, mat) in &map.blocks {
            assert_eq!(*mat, SparseMatrix::identity(sum.complex.dim(Degree(*deg)), q()));
        }
    }

    #[test]
    fn right_diagonal_matches_bar_input_shape() {
        // the second-kind Hochschild engines feed Br(B, E, M); check that
        // the right diagonal module composes with the bar builder over E
        let cat = sample::exterior(q(), GradingGroup::Int);
        let (e, nd) = right_diagonal_bimodule(&cat);
        let (_, md) = diagonal_bimodule(&cat);
        let bc = bar_bicomplex(&e, &nd, &md, 2).unwrap();
        let rep = bc.check_identities();
        assert!(rep.ok(), "bar over E: {:?}", rep.failures);
    }
}
