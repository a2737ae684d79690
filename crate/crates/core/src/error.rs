use thiserror::Error;

/// Errors raised by the numerical kernels and the operators built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The value exists but is not representable; `log_value` carries its natural log.
    #[error("overflow: result exceeds f64 range (ln value = {log_value})")]
    Overflow { log_value: f64 },

    #[error("{what} failed to converge after {iterations} iterations")]
    Convergence { what: &'static str, iterations: usize },

    #[error("truncation dim {dim} too small: tail {tail:e} exceeds tolerance, need dim >= {required}")]
    Truncation { dim: usize, required: usize, tail: f64 },

    #[error("representation mismatch: k = {left} vs k = {right}")]
    Mismatch { left: f64, right: f64 },

    #[error("admissibility predicate is not monotone in k near k = {k}")]
    NonMonotone { k: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
