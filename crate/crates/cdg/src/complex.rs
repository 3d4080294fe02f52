//! Finite cochain complexes of vector spaces and their homology.

use std::collections::BTreeMap;

use crate::error::{CdgError, Result};
use crate::grading::{Degree, GradingGroup};
use crate::matrix::{linvec_get, LinVec, SparseMatrix, Subspace};
use crate::scalar::Field;

/// A finite complex of finite-dimensional vector spaces, with differentials
/// raising the degree by `one`.  Degrees are stored canonically (0/1 for the
/// `Z/2` grading, where the map out of degree 1 lands back in degree 0).
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    pub field: Field,
    pub grading: GradingGroup,
    pub dims: BTreeMap<i64, usize>,
    /// `maps[g]`: the differential out of degree `g`; absent means zero.
    pub maps: BTreeMap<i64, SparseMatrix>,
}

impl FiniteComplex {
    pub fn new(field: Field, grading: GradingGroup) -> Self {
        FiniteComplex {
            field,
            grading,
            dims: BTreeMap::new(),
            maps: BTreeMap::new(),
        }
    }

    pub fn dim(&self, g: Degree) -> usize {
        *self.dims.get(&self.grading.canon(g.0).0).unwrap_or(&0)
    }

    pub fn set_dim(&mut self, g: Degree, dim: usize) {
        let g = self.grading.canon(g.0).0;
        if dim == 0 {
            self.dims.remove(&g);
        } else {
            self.dims.insert(g, dim);
        }
    }

    /// Differential out of degree `g`, materialized with its correct shape.
    pub fn map(&self, g: Degree) -> SparseMatrix {
        let g = self.grading.canon(g.0);
        let next = self.grading.add(g, self.grading.one());
        self.maps
            .get(&g.0)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.dim(next), self.dim(g)))
    }

    pub fn set_map(&mut self, g: Degree, m: SparseMatrix) -> Result<()> {
        let g = self.grading.canon(g.0);
        let next = self.grading.add(g, self.grading.one());
        if m.cols != self.dim(g) || m.rows != self.dim(next) {
            return Err(CdgError::Dimension(format!(
                "map out of degree {g} has shape {}x{}, expected {}x{}",
                m.rows,
                m.cols,
                self.dim(next),
                self.dim(g)
            )));
        }
        if m.is_zero() {
            self.maps.remove(&g.0);
        } else {
            self.maps.insert(g.0, m);
        }
        Ok(())
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for (&g, m) in &self.maps {
            let g = Degree(g);
            let next = self.grading.add(g, self.grading.one());
            let sq = self.map(next).mul(m)?;
            if !sq.is_zero() {
                return Err(CdgError::Invalid(format!(
                    "d^2 != 0 out of degree {g}: entry ({}, {}) = {}",
                    sq.entries[0].0, sq.entries[0].1, sq.entries[0].2
                )));
            }
        }
        Ok(())
    }

    /// Homology dimensions per degree; checks `d^2 = 0` first.
    pub fn homology_dims(&self) -> Result<BTreeMap<i64, usize>> {
        self.check_square_zero()?;
        let mut out = BTreeMap::new();
        let degrees: std::collections::BTreeSet<i64> = self
            .dims
            .keys()
            .copied()
            .collect();
        for &g in &degrees {
            let g = Degree(g);
            let prev = self.grading.sub(g, self.grading.one());
            let out_rank = self.map(g).rank();
            let in_rank = self.map(prev).rank();
            let h = self.dim(g) - out_rank - in_rank;
            if h > 0 {
                out.insert(g.0, h);
            }
        }
        Ok(out)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }
}

/// Projection data for a quotient `k^n -> k^n / U`.
pub struct QuotientMap {
    /// The quotient dimension.
    pub dim: usize,
    /// Ambient basis indices chosen as representatives of the quotient basis.
    pub free_columns: Vec<usize>,
    /// `dim x n` projection matrix in the chosen bases.
    pub projection: SparseMatrix,
}

/// Quotient of `k^n` by the span of `vectors`: the quotient basis is the set
/// of non-pivot coordinates, and the projection sends each ambient basis
/// vector to its fully reduced residual.
pub fn quotient_by_span(n: usize, vectors: &[LinVec]) -> QuotientMap {
    let sub = Subspace::from_spanning(n, vectors);
    let pivot_set: std::collections::HashSet<usize> =
        sub.rref.pivot_columns().into_iter().collect();
    let free_columns: Vec<usize> = (0..n).filter(|i| !pivot_set.contains(i)).collect();
    let free_index: std::collections::HashMap<usize, usize> = free_columns
        .iter()
        .enumerate()
        .map(|(q, &i)| (i, q))
        .collect();
    let mut triplets = Vec::new();
    for (q, &i) in free_columns.iter().enumerate() {
        // residual of e_i is e_i itself for free columns
        triplets.push((q, i, one_of(&sub, vectors)));
    }
    for (p, row) in sub.rref.pivots.iter().zip(sub.rref.rows.iter()) {
        let Some(p) = p else { continue };
        // e_p maps to -(row minus its pivot), supported on free columns
        for (c, v) in row {
            if *c == *p {
                continue;
            }
            let q = free_index[c];
            triplets.push((q, *p, v.neg()));
        }
    }
    let projection =
        SparseMatrix::from_triplets(free_columns.len(), n, triplets).expect("valid projection");
    QuotientMap {
        dim: free_columns.len(),
        free_columns,
        projection,
    }
}

fn one_of(sub: &Subspace, vectors: &[LinVec]) -> crate::scalar::Scalar {
    for row in &sub.rref.rows {
        if let Some((_, c)) = row.first() {
            return c.field().one();
        }
    }
    for v in vectors {
        if let Some((_, c)) = v.first() {
            return c.field().one();
        }
    }
    Field::Q.one()
}

/// Quotient with an explicit field so an empty span still yields scalars of
/// the right kind.
pub fn quotient_by_span_in(field: Field, n: usize, vectors: &[LinVec]) -> QuotientMap {
    if vectors.iter().all(|v| v.is_empty()) {
        return QuotientMap {
            dim: n,
            free_columns: (0..n).collect(),
            projection: SparseMatrix::identity(n, field),
        };
    }
    quotient_by_span(n, vectors)
}

/// Pick out the coefficient of a quotient basis element in a projected vector.
pub fn quotient_coord(qm: &QuotientMap, v: &LinVec, q: usize) -> Option<crate::scalar::Scalar> {
    linvec_get(&qm.projection.apply(v), q).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(n: i64) -> Scalar {
        Field::Q.from_i64(n)
    }

    #[test]
    fn two_term_complex_homology() {
        // 0 -> k -> k -> 0 with d = id: acyclic
        let mut c = FiniteComplex::new(Field::Q, GradingGroup::Int);
        c.set_dim(Degree(0), 1);
        c.set_dim(Degree(1), 1);
        c.set_map(Degree(0), SparseMatrix::identity(1, Field::Q))
            .unwrap();
        assert!(c.homology_dims().unwrap().is_empty());
        // with d = 0: homology is everything
        let mut c = FiniteComplex::new(Field::Q, GradingGroup::Int);
        c.set_dim(Degree(0), 1);
        c.set_dim(Degree(1), 1);
        let h = c.homology_dims().unwrap();
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.get(&1), Some(&1));
    }

    #[test]
    fn square_nonzero_detected() {
        let mut c = FiniteComplex::new(Field::Q, GradingGroup::ModTwo);
        c.set_dim(Degree(0), 1);
        c.set_dim(Degree(1), 1);
        c.set_map(Degree(0), SparseMatrix::identity(1, Field::Q))
            .unwrap();
        c.set_map(Degree(1), SparseMatrix::identity(1, Field::Q))
            .unwrap();
        assert!(c.homology_dims().is_err());
    }

    #[test]
    fn mod_two_periodic_complex() {
        // k <-> k with both maps zero
        let mut c = FiniteComplex::new(Field::Q, GradingGroup::ModTwo);
        c.set_dim(Degree(0), 2);
        c.set_dim(Degree(1), 2);
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 0, q(1))]).unwrap();
        let n = SparseMatrix::from_triplets(2, 2, vec![(1, 1, q(1))]).unwrap();
        c.set_map(Degree(0), m).unwrap();
        c.set_map(Degree(1), n).unwrap();
        // d1 d0 has entry (1,1)*(0,0) = 0; d0 d1 likewise
        let h = c.homology_dims().unwrap();
        assert_eq!(h.get(&0), None);
        assert_eq!(h.get(&1), None);
    }

    #[test]
    fn quotient_projection() {
        // quotient of k^3 by span(e0 + e1)
        let qm = quotient_by_span(3, &[vec![(0, q(1)), (1, q(1))]]);
        assert_eq!(qm.dim, 2);
        assert_eq!(qm.free_columns, vec![1, 2]);
        // e0 |-> -e1 in the quotient basis
        let img = qm.projection.apply(&vec![(0, q(1))]);
        assert_eq!(img, vec![(0, q(-1))]);
        // e0 + e1 |-> 0
        assert!(qm
            .projection
            .apply(&vec![(0, q(1)), (1, q(1))])
            .is_empty());
    }
}
