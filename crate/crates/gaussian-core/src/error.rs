use thiserror::Error;

/// Errors for Gaussian-space operations.
#[derive(Debug, Error)]
pub enum GaussError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {name}")]
    EmptyInput { name: &'static str },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("not a contraction: operator norm {op_norm} exceeds 1")]
    NotAContraction { op_norm: f64 },

    #[error("matrix not positive semidefinite: eigenvalue {eigenvalue}")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("grid step {step} too coarse for kernel width {r}: step must be at most {max_step}")]
    GridTooCoarse { r: f64, step: f64, max_step: f64 },

    #[error("grid too short: output needs the input to cover its support plus 6r padding")]
    GridTooShort,

    #[error("(p, q) must lie on the unit circle: p^2 + q^2 = {norm_sq}")]
    NotOnUnitCircle { norm_sq: f64 },

    #[error("non-finite value encountered in {what}")]
    NonFinite { what: &'static str },
}

pub type Result<T> = std::result::Result<T, GaussError>;
