use num_traits::{One, Zero};

use super::kernel::{kernel_from_lift, KernelBasis};
use super::lift::{lift_unchecked, LiftedTriple};
use super::transvectant::{factorial_scalar, jordan_only, projection_coefficient, transvectant_unchecked, unit_vector};
use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, Scalar};
use crate::nilpotent::{build_sl2_triple, jordan_matrix, NilpotentSpec};
use crate::poly::{Monomial, Poly, SliceBasis, VectorPoly};

/// Splitting of one slice along `im conn_n ⊕ ker conn_m`.
pub(crate) struct SliceSplitter {
    pub basis: SliceBasis,
    pub lifted: LiftedTriple,
    pub kernel: KernelBasis,
    kernel_matrix: ExactMatrix,
    /// `[conn_n conn_m | K]`
    system: ExactMatrix,
}

pub(crate) struct Split {
    pub kernel_part: VectorPoly,
    /// `psi` in `im conn_m` with `conn_n psi = element - kernel_part`.
    pub preimage: VectorPoly,
}

impl SliceSplitter {
    pub fn new(spec: &NilpotentSpec, d: usize) -> Result<Self> {
        let triple = build_sl2_triple(spec)?;
        let basis = SliceBasis::new(spec.dim(), d);
        let lifted = lift_unchecked(spec, &triple, &basis);
        let kernel = kernel_from_lift(&lifted, &basis);
        let columns: Vec<Vec<Scalar>> = kernel.vectors.iter().map(|v| v.element.to_coords(&basis)).collect();
        let kernel_matrix = ExactMatrix::from_columns(basis.dim(), &columns);
        let nm = &lifted.conn_n.matrix * &lifted.conn_m.matrix;
        let system = nm.hstack(&kernel_matrix)?;
        Ok(SliceSplitter { basis, lifted, kernel, kernel_matrix, system })
    }

    pub fn split(&self, element: &VectorPoly) -> Result<Split> {
        let coords = element.to_coords(&self.basis);
        let x = self.system.solve(&coords)?;
        let dim = self.basis.dim();
        let chi = &x[..dim];
        let y = &x[dim..];
        let kernel_part = VectorPoly::from_coords(&self.basis, &self.kernel_matrix.mul_vec(y));
        let preimage = VectorPoly::from_coords(&self.basis, &self.lifted.conn_m.matrix.mul_vec(chi));
        Ok(Split { kernel_part, preimage })
    }
}

fn slice_degree(element: &VectorPoly) -> Result<Option<usize>> {
    if element.is_zero() {
        return Ok(None);
    }
    element.homogeneous_degree().map(Some).ok_or(Error::NotHomogeneous)
}

/// Component of a homogeneous element in `ker conn_m` along `im conn_n`,
/// computed by solving `[conn_n | K] x = element`.
pub fn project_ker_generic(element: &VectorPoly, spec: &NilpotentSpec) -> Result<VectorPoly> {
    let Some(d) = slice_degree(element)? else { return Ok(element.clone()) };
    let triple = build_sl2_triple(spec)?;
    let basis = SliceBasis::new(spec.dim(), d);
    let lifted = lift_unchecked(spec, &triple, &basis);
    let kernel = kernel_from_lift(&lifted, &basis);
    let columns: Vec<Vec<Scalar>> = kernel.vectors.iter().map(|v| v.element.to_coords(&basis)).collect();
    let k = ExactMatrix::from_columns(basis.dim(), &columns);
    let system = lifted.conn_n.matrix.hstack(&k)?;
    let x = system.solve(&element.to_coords(&basis))?;
    Ok(VectorPoly::from_coords(&basis, &k.mul_vec(&x[basis.dim()..])))
}

/// Projection of `x^a e_K` for one Jordan block of size `n` by the closed
/// Clebsch-Gordan inversion: writing `x^a e_K = j! i! w^(j) ⊗ e_n^(i)` with
/// `w` the shift of `x^a` down to `x1`, the kernel part is
/// `j! i! c_(i,j) ⋈_(i+j)(w, e_n)`.
pub fn project_ker_fast(element: &VectorPoly, spec: &NilpotentSpec) -> Result<VectorPoly> {
    jordan_only(spec)?;
    if slice_degree(element)?.is_none() {
        return Ok(element.clone());
    }
    let n = spec.dim();
    let nmat = jordan_matrix(spec);
    let top = unit_vector(n, n - 1);
    let mut out = VectorPoly::zero(n);
    for (m, comp, c) in element.terms() {
        let support: Vec<usize> = m.support().collect();
        let (shift, weight) = match (support.first(), support.last()) {
            (Some(&lo), Some(&hi)) => (lo, (n - 1 - hi + lo) as i64),
            _ => (0, 0),
        };
        let i = n - 1 - comp;
        let j = shift;
        let p = i + j;
        if p as i64 > weight.min(n as i64 - 1) {
            continue;
        }
        let mut shifted = vec![0u32; n];
        for (k, &e) in m.exponents().iter().enumerate().skip(shift) {
            shifted[k - shift] = e;
        }
        let w = Poly::monomial(Monomial::new(shifted), Scalar::one());
        let coeff = c * factorial_scalar(i) * factorial_scalar(j) * projection_coefficient(n - 1, weight as usize, i, j);
        if coeff.is_zero() {
            continue;
        }
        let t = transvectant_unchecked(&nmat, &w, weight, &top, n as i64 - 1, p);
        out = out.add(&t.scale(&coeff));
    }
    Ok(out)
}

/// Kernel component of a homogeneous element; uses the closed formula for a
/// single Jordan block in Jordan frame and the linear solve otherwise.
pub fn project_ker(element: &VectorPoly, spec: &NilpotentSpec) -> Result<VectorPoly> {
    if jordan_only(spec).is_ok() {
        project_ker_fast(element, spec)
    } else {
        project_ker_generic(element, spec)
    }
}
