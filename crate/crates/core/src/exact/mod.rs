//! Exact rational scalars and matrices with canonical RREF-based linear algebra.

mod matrix;
mod scalar;

pub use matrix::{ExactMatrix, Rref};
pub use scalar::{binom, binomial, factorial, format_scalar, frac, from_bigint, int, parse_scalar, to_i64, Scalar};
pub(crate) use scalar::sign_factor;

/// Kernel comparison: `ker a = ker b` iff both have the rank of `[a; b]`.
pub fn kernels_agree(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    let Ok(stacked) = a.vstack(b) else { return false };
    let r = stacked.rank();
    a.rank() == r && b.rank() == r
}

/// Dimension of the intersection of the column spaces of `a` and `b`.
pub fn column_space_intersection_dim(a: &ExactMatrix, b: &ExactMatrix) -> usize {
    let ra = a.rank();
    let rb = b.rank();
    let joint = a.hstack(b).map(|m| m.rank()).unwrap_or(0);
    ra + rb - joint
}
