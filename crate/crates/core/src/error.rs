use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not a prime")]
    InvalidPrime(u64),
    #[error("invalid invariants: {0}")]
    InvalidInvariants(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("out of family: {0}")]
    OutOfFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("spectrum certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
