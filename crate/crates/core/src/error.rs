use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Invalid ring, module or map data (non-prime modulus, ill-defined map, ...).
    #[error("construction error: {0}")]
    Construction(String),
    /// Vectors or matrices whose sizes do not fit together.
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    /// An operation's stated precondition does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("non-homogeneous data: {0}")]
    NonHomogeneous(String),
    /// A Groebner computation or build loop ran past its configured budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
