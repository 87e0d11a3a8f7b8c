use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field of order {q}^{m} is too large")]
    FieldTooLarge { q: u64, m: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("infeasible target: {0}")]
    InfeasibleTarget(String),
    #[error("invalid prefix: {0}")]
    InvalidPrefix(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("no success within {0} iterations")]
    IterationCapExceeded(u64),
    #[error("wrong regime: {0}")]
    WrongRegime(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
