//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation input was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two fields that must live on the same collocation grid do not.
    #[error("grid mismatch: {left} vs {right} collocation points")]
    GridMismatch { left: usize, right: usize },

    /// Adaptive quadrature could not certify the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureConvergence(String),

    /// The solution left the regime the integrator can represent.
    #[error(
        "blow-up detected at step {step_index} (t = {t:.6e}): \
         last finite norms a1 = {a1:.6e}, a1_hom = {a1_hom:.6e}"
    )]
    BlowUp {
        step_index: u64,
        t: f64,
        a1: f64,
        a1_hom: f64,
    },

    /// A run configuration failed to parse or validate.
    /// `line` is 1-based; 0 means the location is not tied to a line.
    #[error("config error at line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("csv error at line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn config(line: usize, key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            line,
            key: key.into(),
            message: message.into(),
        }
    }
}
