//! Exact sl2 machinery for maps with nilpotent linear part.
//!
//! The crate builds sl2-triples from a nilpotent matrix given by Jordan block
//! sizes, lifts them to homological operators on homogeneous polynomial
//! slices, computes normal forms in the `ker conn_m` style and checks the
//! results with representation-theoretic dimension counts.

pub mod error;
pub mod exact;
pub mod genfun;
pub mod mapfile;
pub mod nilpotent;
pub mod normalizer;
pub mod poly;
pub mod sl2;

pub use error::{Error, ParseError, Result};
