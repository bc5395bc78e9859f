use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("not a delta operator: {0}")]
    NotDelta(String),
    #[error("unknown delta kind `{0}`")]
    UnknownKind(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("insufficient input order: need {needed}, have {have}")]
    InsufficientOrder { needed: usize, have: usize },
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}
