use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("operands belong to different contexts")]
    ContextMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("characteristic-2 obstruction: {0}")]
    Obstruction(String),
    #[error("precision {prec} too large for p = {p}")]
    PrecisionOverflow { p: u64, prec: u32 },
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
