use thiserror::Error;

/// Errors raised by the transform library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HdError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("point {x} lies outside the domain [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value {value} at node {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("degenerate kernel: integral {value} at x = {x}")]
    DegenerateKernel { x: f64, value: f64 },

    #[error("normalization iteration diverged (residual trace {trace:?})")]
    NonConvergence { trace: Vec<f64> },

    #[error("ill-conditioned system: {0}")]
    Conditioning(String),

    #[error("empty system: no constraint rows")]
    EmptySystem,

    #[error("finite-difference stencil does not fit in [{a}, {b}] at x = {x}")]
    Stencil { x: f64, a: f64, b: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("encoder mismatch: {0}")]
    EncoderMismatch(String),
}

pub type Result<T> = std::result::Result<T, HdError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> HdError {
    HdError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
