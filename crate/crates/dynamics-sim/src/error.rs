use thiserror::Error;

pub type Result<T> = std::result::Result<T, DynError>;

/// Errors raised by the finite-dimensional dynamics simulators.
#[derive(Debug, Error)]
pub enum DynError {
    #[error("dimension mismatch: action is {expected}-dimensional, point is {got}-dimensional")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("|a| = {a} exceeds the 2^40 guard for closed-form cocycle evaluation")]
    FrequencyTooLarge { a: i64 },

    #[error(
        "variance guard: {what} = {value:.6} exceeds {limit}; the lognormal integrand is too \
         heavy-tailed for a Monte-Carlo mean at this size, rescale the action"
    )]
    VarianceGuard {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("callback failed: {reason}")]
    Callback { reason: String },

    #[error("B is not a subset of A: {element} missing from A")]
    NotSubset { element: i64 },

    #[error(transparent)]
    Spectral(#[from] cantor_spectral::CantorError),
}
