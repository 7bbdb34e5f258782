use num_traits::One;

use super::scalar_poly::Poly;
use super::vector_poly::VectorPoly;
use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, Scalar};

/// `f ∘ g` with every term above degree `max_degree` dropped.
pub fn compose_truncated(f: &VectorPoly, g: &VectorPoly, max_degree: usize) -> Result<VectorPoly> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    if g.has_constant_term() {
        return Err(Error::ConstantTerm);
    }
    let n = f.dim();
    let g_comps: Vec<Poly> = g.truncate(max_degree).components();
    let mut powers: Vec<Vec<Poly>> = g_comps.iter().map(|c| vec![Poly::constant(n, Scalar::one()), c.clone()]).collect();
    let mut out = VectorPoly::zero(n);
    for (m, j, c) in f.terms() {
        if m.degree() > max_degree {
            continue;
        }
        let mut prod = Poly::constant(n, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            let e = e as usize;
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e {
                let next = powers[i].last().expect("nonempty").mul_truncated(&g_comps[i], max_degree);
                powers[i].push(next);
            }
            prod = prod.mul_truncated(&powers[i][e], max_degree);
            if prod.is_zero() {
                break;
            }
        }
        for (mm, cc) in prod.terms() {
            out.add_term(mm.clone(), j, cc.clone());
        }
    }
    Ok(out)
}

/// Inverse of a near-identity map modulo degree `> max_degree`.
///
/// Starting from `psi = id`, the degree-`k` error of `phi ∘ psi` is
/// subtracted from `psi` for `k = 2..=max_degree`.
pub fn invert_near_identity(phi: &VectorPoly, max_degree: usize) -> Result<VectorPoly> {
    let n = phi.dim();
    if phi.has_constant_term() {
        return Err(Error::ConstantTerm);
    }
    if phi.linear_part() != ExactMatrix::identity(n) {
        return Err(Error::NotNearIdentity);
    }
    let id = VectorPoly::identity(n);
    let mut psi = id.clone();
    for k in 2..=max_degree {
        let err = compose_truncated(phi, &psi, k)?.sub(&id).slice(k);
        if !err.is_zero() {
            psi = psi.sub(&err);
        }
    }
    Ok(psi)
}
