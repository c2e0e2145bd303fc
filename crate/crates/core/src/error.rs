use thiserror::Error;

/// Errors raised by the library. Numerical routines never return partially
/// certified results: they either certify or report why they could not.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index beyond expansion: requested {requested}, expansion has {available}")]
    IndexBeyondExpansion { requested: usize, available: usize },
    #[error("finite expansion: input is rational")]
    FiniteExpansion,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("operation requires a periodic continued fraction")]
    NotPeriodic,
    #[error("period length {0} is not supported here")]
    UnsupportedPeriod(usize),
    #[error("T too small: {0}")]
    TooSmall(String),
    #[error("zero-freeness not certified: {0}")]
    NotZeroFree(String),
    #[error("no qualifying indices up to depth {0}")]
    NoQualifyingIndices(usize),
    #[error("undecided: {0}")]
    Undecided(String),
}

pub type Result<T> = std::result::Result<T, Error>;
