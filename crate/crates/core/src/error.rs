use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid block sizes: {0}")]
    InvalidBlocks(String),
    #[error("conjugator is singular")]
    SingularConjugator,
    #[error("nilpotency index {0} < 2 gives a degenerate triple")]
    DegenerateTriple(usize),
    #[error("bracket relation failed: {0}")]
    BracketFailure(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("map has a constant term")]
    ConstantTerm,
    #[error("linear part is not the identity")]
    NotNearIdentity,
    #[error("linear part does not match the nilpotent spec")]
    LinearPartMismatch,
    #[error("element is not a top weight vector: {0}")]
    NotTopWeight(String),
    #[error("transvectant order {order} exceeds weights {left} and {right}")]
    TransvectantOrder { order: usize, left: i64, right: i64 },
    #[error("Clebsch-Gordan indices violate i + j = k + p")]
    CgConstraint,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("ker mult_m style is not a complement of im conn_n at degree {0}")]
    StyleNotComplement(usize),
    #[error("block sizes must satisfy k1 <= k2 (got {0}, {1})")]
    BlockOrder(usize, usize),
    #[error("{0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational `{0}`")]
    Rational(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invalid map file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
