use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: not a prime")]
    InvalidModulus(u64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("line count mismatch: {left} vs {right}")]
    LineCountMismatch { left: usize, right: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("zero-dimensional cone")]
    ZeroDimensional,

    #[error("cone is not pointed (inequality normals have rank {rank} < {dim})")]
    NotPointed { rank: usize, dim: usize },

    #[error("cone is not full-dimensional (rays have rank {rank} < {dim})")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("vector lies outside the cone")]
    OutsideCone,

    #[error("not effective: violates {0}")]
    NotEffective(String),

    #[error("precondition unmet: {0}")]
    Precondition(String),

    #[error("degenerate field: {0}")]
    DegenerateField(String),

    #[error("degenerate line configuration: {0}")]
    DegenerateConfig(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
