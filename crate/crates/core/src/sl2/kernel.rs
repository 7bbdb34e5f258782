use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::lift::{lift_unchecked, starred_on, LiftedTriple};
use crate::error::{Error, Result};
use crate::exact::{int, to_i64, ExactMatrix, Scalar};
use crate::nilpotent::{build_sl2_triple, NilpotentSpec};
use crate::poly::{mult_matrix, slice_dim, Poly, SliceBasis, VectorPoly};

/// Homogeneous polynomial map that is an eigenvector of `cann_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub element: VectorPoly,
    pub weight: i64,
}

/// Homogeneous scalar polynomial that is an eigenvector of the starred `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarWeightVector {
    pub element: Poly,
    pub weight: i64,
}

/// Canonical basis of `ker conn_m` on one slice, tagged with weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    pub n: usize,
    pub degree: usize,
    pub vectors: Vec<WeightVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionCount {
    pub degree: usize,
    pub kernel_dim: usize,
    pub weight_sum: i64,
    pub expected: i64,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.vectors.iter().map(|v| v.weight).collect()
    }

    /// `sum (weight + 1)` against `n * dim P_d`.
    pub fn dimension_count(&self) -> DimensionCount {
        DimensionCount {
            degree: self.degree,
            kernel_dim: self.dim(),
            weight_sum: self.vectors.iter().map(|v| v.weight + 1).sum(),
            expected: (self.n * slice_dim(self.n, self.degree)) as i64,
        }
    }

    pub fn dimension_identity_holds(&self) -> bool {
        let c = self.dimension_count();
        c.weight_sum == c.expected
    }
}

/// Eigenvalue of `h` on `v`, if `v` is a nonzero eigenvector with integer eigenvalue.
pub(crate) fn eigenvalue(h: &ExactMatrix, v: &[Scalar]) -> Option<i64> {
    let hv = h.mul_vec(v);
    let k = v.iter().position(|c| !c.is_zero())?;
    let lambda = &hv[k] / &v[k];
    if hv.iter().zip(v).all(|(a, b)| *a == &lambda * b) {
        to_i64(&lambda)
    } else {
        None
    }
}

type SparseVec = Vec<(usize, Scalar)>;

fn sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Weight-tagged nullspace of `raise` as sparse coordinate vectors.
///
/// A diagonal `h` splits the problem into one nullspace per weight; the
/// result is the same canonical free-column basis as for `raise` itself.
/// Otherwise the canonical basis of `raise` is used when all of its vectors
/// are `h`-eigenvectors, and the bases of `ker raise ∩ ker (h - w)` for
/// descending `w` when they are not.
pub(crate) fn weighted_kernel(raise: &ExactMatrix, h: &ExactMatrix, max_weight: i64) -> Vec<(SparseVec, i64)> {
    if h.is_diagonal() {
        return diagonal_weighted_kernel(raise, h);
    }
    let basis = raise.nullspace_basis();
    let tagged: Option<Vec<(SparseVec, i64)>> =
        basis.iter().map(|v| eigenvalue(h, v).map(|w| (sparse(v), w))).collect();
    if let Some(t) = tagged {
        return t;
    }
    let dim = h.rows();
    let mut out = Vec::new();
    for w in (-max_weight..=max_weight).rev() {
        let shifted = h - &ExactMatrix::identity(dim).scale(&int(w));
        let stacked = raise.vstack(&shifted).expect("square operators of equal size");
        for v in stacked.nullspace_basis() {
            out.push((sparse(&v), w));
        }
    }
    out
}

fn diagonal_weighted_kernel(raise: &ExactMatrix, h: &ExactMatrix) -> Vec<(SparseVec, i64)> {
    let diag = h.diagonal_entries();
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (j, w) in diag.iter().enumerate() {
        let w = to_i64(w).expect("integer weights");
        groups.entry(w).or_default().push(j);
    }
    let columns = raise.transpose();
    let mut found: Vec<(usize, SparseVec, i64)> = Vec::new();
    for (w, cols) in groups {
        let sub: Vec<Vec<(usize, Scalar)>> = cols.iter().map(|&j| columns.row_entries(j).to_vec()).collect();
        let sub = ExactMatrix::from_sparse_columns(raise.rows(), sub);
        for v in sub.nullspace_basis() {
            let entries: SparseVec = sparse(&v).into_iter().map(|(k, c)| (cols[k], c)).collect();
            let key = entries.last().expect("nonzero nullspace vector").0;
            found.push((key, entries, w));
        }
    }
    found.sort_by_key(|(k, _, _)| *k);
    found.into_iter().map(|(_, v, w)| (v, w)).collect()
}

fn max_weight(spec: &NilpotentSpec, d: usize) -> i64 {
    ((d + 1) * (spec.index() - 1)) as i64
}

pub(crate) fn kernel_from_lift(lifted: &LiftedTriple, basis: &SliceBasis) -> KernelBasis {
    let vectors = weighted_kernel(&lifted.conn_m.matrix, &lifted.cann_h.matrix, max_weight(&lifted.spec, basis.degree()))
        .into_iter()
        .map(|(v, weight)| WeightVector { element: VectorPoly::from_sparse_coords(basis, &v), weight })
        .collect();
    KernelBasis { n: basis.n(), degree: basis.degree(), vectors }
}

/// Canonical basis of `ker conn_m` on `P_d ⊗ R^n` with `cann_h` weights.
///
/// At `d = 0` the slice is `R^n` itself and the kernel is `ker m_bar`
/// weighted by `h_bar`.
pub fn kernel_basis(spec: &NilpotentSpec, d: usize) -> Result<KernelBasis> {
    let triple = build_sl2_triple(spec)?;
    let basis = SliceBasis::new(spec.dim(), d);
    let lifted = lift_unchecked(spec, &triple, &basis);
    Ok(kernel_from_lift(&lifted, &basis))
}

/// Canonical basis of `ker (starred m)` on the scalar slice `P_d` with
/// starred `h` weights. The constant slice contributes one vector of weight 0.
pub fn starred_kernel_basis(spec: &NilpotentSpec, d: usize) -> Result<Vec<ScalarWeightVector>> {
    if spec.index() < 2 {
        return Err(Error::DegenerateTriple(spec.index()));
    }
    let basis = SliceBasis::new(spec.dim(), d);
    let t = starred_on(spec, &basis);
    Ok(weighted_kernel(&t.m, &t.h, max_weight(spec, d))
        .into_iter()
        .map(|(v, weight)| ScalarWeightVector { element: Poly::from_sparse_coords(&basis, &v), weight })
        .collect())
}

/// Canonical basis of `ker mult_m = P_d ⊗ ker m` on one slice.
pub fn mult_kernel_basis(spec: &NilpotentSpec, d: usize) -> Result<Vec<VectorPoly>> {
    let triple = build_sl2_triple(spec)?;
    let basis = SliceBasis::new(spec.dim(), d);
    let m = mult_matrix(&triple.raw_m, basis.scalar_dim());
    Ok(m.nullspace_basis().iter().map(|v| VectorPoly::from_coords(&basis, v)).collect())
}
