use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("non-finite value {value} at {point}")]
    NonFinite { point: String, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quadrature did not converge on [{a}, {b}]: estimate {estimate}, error {error}")]
    NoConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain {
        op,
        msg: msg.into(),
    }
}
