use thiserror::Error;

/// Errors raised by the solvers, channels and file loaders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension { what: &'static str, expected: usize, got: usize },

    #[error("KL divergence is infinite: p[{index}] > 0 where q[{index}] = 0")]
    InfiniteDivergence { index: usize },

    #[error("zero-probability event in integrand: {what} at (world {world}, percept {percept}, action {action})")]
    ZeroProbability { what: &'static str, world: usize, percept: usize, action: usize },

    #[error("non-finite value at iteration {iteration} in {location}")]
    NonFinite { iteration: usize, location: String },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Error {
    Error::Invalid { what, reason: reason.into() }
}
