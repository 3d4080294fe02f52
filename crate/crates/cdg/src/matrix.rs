//! Exact sparse linear algebra over `Q` and `F_p`.

use crate::error::{CdgError, Result};
use crate::scalar::{Field, Scalar};

/// A sparse linear combination: sorted by index, no zero coefficients.
pub type LinVec = Vec<(usize, Scalar)>;

/// Collapse duplicate indices and drop zeros; result sorted by index.
pub fn linvec_normalize(mut v: LinVec) -> LinVec {
    v.sort_by_key(|&(i, _)| i);
    let mut out: LinVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc = acc.add(&c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// `acc += coeff * v`, where both are normalized sparse vectors.
pub fn linvec_axpy(acc: &mut LinVec, coeff: &Scalar, v: &LinVec) {
    if coeff.is_zero() {
        return;
    }
    let mut merged: LinVec = Vec::with_capacity(acc.len() + v.len());
    let mut a = acc.iter().peekable();
    let mut b = v.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(&&(i, _)), Some(&&(j, _))) if i < j => {
                merged.push(a.next().unwrap().clone());
            }
            (Some(&&(i, _)), Some(&&(j, _))) if i > j => {
                let (j, c) = b.next().unwrap();
                merged.push((*j, c.mul(coeff)));
            }
            (Some(_), Some(_)) => {
                let (i, c1) = a.next().unwrap();
                let (_, c2) = b.next().unwrap();
                merged.push((*i, c1.add(&c2.mul(coeff))));
            }
            (Some(_), None) => merged.push(a.next().unwrap().clone()),
            (None, Some(_)) => {
                let (j, c) = b.next().unwrap();
                merged.push((*j, c.mul(coeff)));
            }
            (None, None) => break,
        }
    }
    merged.retain(|(_, c)| !c.is_zero());
    *acc = merged;
}

pub fn linvec_scale(v: &LinVec, coeff: &Scalar) -> LinVec {
    if coeff.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, c)| (*i, c.mul(coeff))).collect()
}

pub fn linvec_get<'a>(v: &'a LinVec, i: usize) -> Option<&'a Scalar> {
    v.binary_search_by_key(&i, |&(j, _)| j)
        .ok()
        .map(|pos| &v[pos].1)
}

/// A sparse matrix in triplet form.  No duplicate coordinates, no stored
/// zeros; entries sorted by (row, col).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, field.one())).collect(),
        }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: Vec<(usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut entries = triplets;
        entries.retain(|(_, _, c)| !c.is_zero());
        entries.sort_by_key(|&(r, c, _)| (r, c));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(CdgError::Invalid(format!(
                    "duplicate entry at ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        for &(r, c, _) in &entries {
            if r >= rows || c >= cols {
                return Err(CdgError::Dimension(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
        }
        Ok(SparseMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Build from columns: `columns[j]` is the j-th column as a sparse vector.
    pub fn from_columns(rows: usize, columns: &[LinVec]) -> Self {
        let mut entries = Vec::new();
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col {
                if !c.is_zero() {
                    entries.push((*i, j, c.clone()));
                }
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SparseMatrix {
            rows,
            cols: columns.len(),
            entries,
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries: Vec<(usize, usize, Scalar)> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    fn to_rows(&self) -> Vec<LinVec> {
        let mut rows: Vec<LinVec> = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            rows[*r].push((*c, v.clone()));
        }
        rows
    }

    pub fn column(&self, j: usize) -> LinVec {
        let mut col = Vec::new();
        for (r, c, v) in &self.entries {
            if *c == j {
                col.push((*r, v.clone()));
            }
        }
        col
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(CdgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        // columns of self, indexed by row of rhs
        let mut self_cols: Vec<LinVec> = vec![Vec::new(); self.cols];
        for (r, c, v) in &self.entries {
            self_cols[*c].push((*r, v.clone()));
        }
        let rhs_cols = {
            let mut cols: Vec<LinVec> = vec![Vec::new(); rhs.cols];
            for (r, c, v) in &rhs.entries {
                cols[*c].push((*r, v.clone()));
            }
            cols
        };
        let mut out_cols: Vec<LinVec> = Vec::with_capacity(rhs.cols);
        for col in &rhs_cols {
            let mut acc: LinVec = Vec::new();
            for (k, v) in col {
                linvec_axpy(&mut acc, v, &self_cols[*k]);
            }
            out_cols.push(acc);
        }
        Ok(SparseMatrix::from_columns(self.rows, &out_cols))
    }

    /// `self * v` for a sparse column vector.
    pub fn apply(&self, v: &LinVec) -> LinVec {
        let mut self_cols: Vec<LinVec> = vec![Vec::new(); self.cols];
        for (r, c, val) in &self.entries {
            self_cols[*c].push((*r, val.clone()));
        }
        let mut acc: LinVec = Vec::new();
        for (j, coeff) in v {
            linvec_axpy(&mut acc, coeff, &self_cols[*j]);
        }
        acc
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(CdgError::Dimension("matrix shape mismatch in add".into()));
        }
        let mut triplets = self.entries.clone();
        triplets.extend(rhs.entries.iter().cloned());
        let mut map: std::collections::BTreeMap<(usize, usize), Scalar> =
            std::collections::BTreeMap::new();
        for (r, c, v) in triplets {
            map.entry((r, c))
                .and_modify(|acc| *acc = acc.add(&v))
                .or_insert(v);
        }
        let entries = map
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, coeff: &Scalar) -> SparseMatrix {
        if coeff.is_zero() {
            return SparseMatrix::zero(self.rows, self.cols);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|(r, c, v)| (*r, *c, v.mul(coeff)))
                .collect(),
        }
    }

    /// Exact rank via elimination with a minimum-fill pivot heuristic.
    pub fn rank(&self) -> usize {
        Rref::of(self).rank
    }

    /// A basis of the null space; cardinality is `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<LinVec> {
        let rref = Rref::of(self);
        rref.kernel_basis(self.cols)
    }

    /// Solve `self * x = b`; returns one solution if consistent.
    pub fn solve(&self, b: &LinVec) -> Option<LinVec> {
        // eliminate on the augmented matrix [A | b]
        let mut aug = self.clone();
        aug.cols += 1;
        for (r, v) in b {
            aug.entries.push((*r, self.cols, v.clone()));
        }
        aug.entries.sort_by_key(|&(r, c, _)| (r, c));
        let rref = Rref::of_with_pivot_limit(&aug, self.cols);
        // consistent iff no pivot row reduces to (0..0 | nonzero)
        let mut x: LinVec = Vec::new();
        for (pivot_col, row) in rref.pivots.iter().zip(rref.rows.iter()) {
            let rhs = linvec_get(row, self.cols).cloned();
            match pivot_col {
                Some(pc) => {
                    if let Some(v) = rhs {
                        x.push((*pc, v));
                    }
                }
                None => {
                    if rhs.is_some() {
                        return None; // inconsistent
                    }
                }
            }
        }
        x.sort_by_key(|&(i, _)| i);
        Some(x)
    }

    /// Solve `self * x = b` for many right-hand sides with one elimination
    /// of the augmented matrix `[A | b_1 ... b_k]`.  `None` if any system is
    /// inconsistent.
    pub fn solve_many(&self, rhs: &[LinVec]) -> Option<Vec<LinVec>> {
        if rhs.is_empty() {
            return Some(Vec::new());
        }
        let mut aug = self.clone();
        aug.cols += rhs.len();
        for (k, b) in rhs.iter().enumerate() {
            for (r, v) in b {
                aug.entries.push((*r, self.cols + k, v.clone()));
            }
        }
        aug.entries.sort_by_key(|&(r, c, _)| (r, c));
        let rref = Rref::of_with_pivot_limit(&aug, self.cols);
        let mut out: Vec<LinVec> = vec![Vec::new(); rhs.len()];
        for (pivot_col, row) in rref.pivots.iter().zip(rref.rows.iter()) {
            match pivot_col {
                Some(pc) => {
                    for (c, v) in row {
                        if *c >= self.cols {
                            out[*c - self.cols].push((*pc, v.clone()));
                        }
                    }
                }
                None => {
                    if row.iter().any(|(c, _)| *c >= self.cols) {
                        return None; // some system inconsistent
                    }
                }
            }
        }
        for x in &mut out {
            x.sort_by_key(|&(i, _)| i);
        }
        Some(out)
    }
}

/// Reduced row echelon data of a sparse matrix.
pub struct Rref {
    pub rank: usize,
    /// For each stored row: its pivot column, or `None` for a zero row kept
    /// only when produced by the augmented solve.
    pub pivots: Vec<Option<usize>>,
    pub rows: Vec<LinVec>,
}

impl Rref {
    pub fn of(m: &SparseMatrix) -> Rref {
        Rref::of_with_pivot_limit(m, m.cols)
    }

    /// Eliminate, allowing pivots only in columns `< pivot_limit`.
    pub fn of_with_pivot_limit(m: &SparseMatrix, pivot_limit: usize) -> Rref {
        let mut active: Vec<LinVec> = m.to_rows().into_iter().filter(|r| !r.is_empty()).collect();
        let mut done: Vec<(usize, LinVec)> = Vec::new();
        let mut zero_rows: Vec<LinVec> = Vec::new();

        while !active.is_empty() {
            // column occupancy among active rows
            let mut col_count: std::collections::HashMap<usize, usize> =
                std::collections::HashMap::new();
            for row in &active {
                for (c, _) in row {
                    if *c < pivot_limit {
                        *col_count.entry(*c).or_insert(0) += 1;
                    }
                }
            }
            // pick pivot minimizing (row_nnz - 1) * (col_count - 1); ties by
            // (col, row order) for determinism
            let mut best: Option<(usize, usize, usize)> = None; // (score-key row, col)
            for (ri, row) in active.iter().enumerate() {
                let rn = row.len();
                for (c, _) in row {
                    if *c >= pivot_limit {
                        continue;
                    }
                    let cn = col_count[c];
                    let score = (rn - 1) * (cn - 1);
                    let cand = (score, *c, ri);
                    if best.map_or(true, |(s, bc, br)| cand < (s, bc, br)) {
                        best = Some(cand);
                    }
                }
            }
            let Some((_, pc, ri)) = best else {
                // remaining rows only touch columns >= pivot_limit
                zero_rows.extend(active.drain(..));
                break;
            };
            let mut pivot_row = active.swap_remove(ri);
            let inv = linvec_get(&pivot_row, pc).unwrap().inv();
            pivot_row = linvec_scale(&pivot_row, &inv);
            let mut next_active = Vec::with_capacity(active.len());
            for mut row in active {
                if let Some(c) = linvec_get(&row, pc).cloned() {
                    linvec_axpy(&mut row, &c.neg(), &pivot_row);
                }
                if !row.is_empty() {
                    next_active.push(row);
                }
            }
            active = next_active;
            // back-substitute into finished rows
            for (_, row) in done.iter_mut() {
                if let Some(c) = linvec_get(row, pc).cloned() {
                    linvec_axpy(row, &c.neg(), &pivot_row);
                }
            }
            done.push((pc, pivot_row));
        }

        done.sort_by_key(|&(pc, _)| pc);
        let rank = done.len();
        let mut pivots: Vec<Option<usize>> = done.iter().map(|&(pc, _)| Some(pc)).collect();
        let mut rows: Vec<LinVec> = done.into_iter().map(|(_, r)| r).collect();
        for z in zero_rows {
            pivots.push(None);
            rows.push(z);
        }
        Rref {
            rank,
            pivots,
            rows,
        }
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().filter_map(|p| *p).collect()
    }

    pub fn kernel_basis(&self, cols: usize) -> Vec<LinVec> {
        let pivot_set: std::collections::HashSet<usize> =
            self.pivot_columns().into_iter().collect();
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v: LinVec = vec![(free, one_like(&self.rows))];
            for (p, row) in self.pivots.iter().zip(self.rows.iter()) {
                let Some(p) = p else { continue };
                if let Some(c) = linvec_get(row, free) {
                    v.push((*p, c.neg()));
                }
            }
            basis.push(linvec_normalize(v));
        }
        basis
    }
}

fn one_like(rows: &[LinVec]) -> Scalar {
    for row in rows {
        if let Some((_, c)) = row.first() {
            return c.field().one();
        }
    }
    // a kernel of the zero matrix never reaches here with unknown field;
    // default to Q (callers with an empty matrix pass field explicitly
    // through `kernel_basis_with_field`)
    Field::Q.one()
}

/// Kernel basis with an explicit field (needed when the matrix has no entries).
pub fn kernel_basis_with_field(m: &SparseMatrix, field: Field) -> Vec<LinVec> {
    if m.entries.is_empty() {
        return (0..m.cols).map(|j| vec![(j, field.one())]).collect();
    }
    m.kernel_basis()
}

/// The span of a set of sparse vectors in `k^dim`: RREF basis plus a
/// membership/coordinates test.
pub struct Subspace {
    pub dim_ambient: usize,
    pub rref: Rref,
}

impl Subspace {
    pub fn from_spanning(dim_ambient: usize, vectors: &[LinVec]) -> Subspace {
        let m = SparseMatrix::from_columns(dim_ambient, vectors).transpose();
        Subspace {
            dim_ambient,
            rref: Rref::of(&m),
        }
    }

    pub fn dim(&self) -> usize {
        self.rref.rank
    }

    pub fn contains(&self, v: &LinVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Reduce `v` modulo the subspace (residual after eliminating pivots).
    pub fn reduce(&self, v: &LinVec) -> LinVec {
        let mut v = v.clone();
        for (p, row) in self.rref.pivots.iter().zip(self.rref.rows.iter()) {
            let Some(p) = p else { continue };
            if let Some(c) = linvec_get(&v, *p).cloned() {
                linvec_axpy(&mut v, &c.neg(), row);
            }
        }
        v
    }
}
