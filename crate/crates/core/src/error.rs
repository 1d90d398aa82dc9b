use thiserror::Error;

/// Errors raised by the spectral solvers and statistics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid boundary data: {0}")]
    InvalidBoundary(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A statistic was requested above the certified completeness threshold of a spectrum.
    #[error("certificate violation: requested {requested} but spectrum is complete only below {complete_below}")]
    Certificate { requested: f64, complete_below: f64 },
    #[error("root bracketing failed: {0}")]
    BracketFailure(String),
    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("degenerate mesh: {0}")]
    DegenerateMesh(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
