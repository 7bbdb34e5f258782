//! Sparse exact polynomial maps and the multiplication, substitution and
//! homological operators acting on them.

mod compose;
mod monomial;
mod ops;
mod scalar_poly;
mod vector_poly;

pub use compose::{compose_truncated, invert_near_identity};
pub use monomial::{monomials_of_degree, slice_dim, Monomial, SliceBasis};
pub use ops::{
    componentwise, homological_op, mono, mult_matrix, mult_op, operator_matrix, operator_matrix_by_columns,
    scalar_subs_matrix, subs_op, GradedOperator, LinearOp,
};
pub(crate) use ops::scalar_subs_matrix_on;
pub use scalar_poly::Poly;
pub use vector_poly::VectorPoly;
