use thiserror::Error;

/// Errors produced by the bound computations, oracles and parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a function (e.g. `gamma(0)`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violates an operation's precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Adaptive quadrature exhausted its depth budget.
    #[error("quadrature tolerance not met: estimated error {error:e} exceeds {requested:e}")]
    ToleranceNotMet { error: f64, requested: f64 },

    /// Bracket doubling could not enclose the target value.
    #[error("root bracket could not be established below {limit:e}")]
    BracketFailure { limit: f64 },

    /// An iterative solver did not converge.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A spectral functional was queried beyond the oracle's completeness cutoff.
    #[error("spectrum incomplete: requested {requested} but only complete up to {available}")]
    Incomplete { requested: f64, available: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
