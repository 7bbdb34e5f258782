//! sl2 action on polynomial maps: the starred and conn triples, weight
//! tagged kernel bases, transvectants, Clebsch-Gordan coefficients and the
//! projection onto `ker conn_m`.

mod describe;
mod kernel;
mod lift;
mod projection;
mod transvectant;

pub use describe::{describe_irreducible_nf, FamilyTerm, NormalFormFamily};
pub use kernel::{
    kernel_basis, mult_kernel_basis, starred_kernel_basis, DimensionCount, KernelBasis, ScalarWeightVector,
    WeightVector,
};
pub use lift::{lift_triple, starred_triple, LiftedTriple, StarredTriple};
pub use projection::{project_ker, project_ker_fast, project_ker_generic};
pub use transvectant::{
    cg_coefficient, inversion_coefficient, polynomial_top_weight, projection_coefficient, transvectant,
    vector_top_weight,
};

pub(crate) use lift::lift_unchecked;
pub(crate) use projection::SliceSplitter;
