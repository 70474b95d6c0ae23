use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),
    #[error("unsupported base algebra: {0}")]
    UnsupportedBase(String),
    #[error("presentation is not graded: {0}")]
    NotGraded(String),
    #[error("no maximal ideal available: {0}")]
    NoMaximalIdeal(String),
    #[error("map is not a ring homomorphism: relation `{relation}` does not map to zero")]
    NotAHomomorphism { relation: String },
    #[error("generators are not minimal: {0}")]
    NonMinimalGenerators(String),
    #[error("strategy `{strategy}` is inapplicable: {reason}")]
    StrategyInapplicable { strategy: String, reason: String },
    #[error("comparison lift failed: {0}")]
    LiftFailure(String),
    #[error("object is infinite-dimensional over the coefficient ring: {0}")]
    InfiniteDimensional(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
