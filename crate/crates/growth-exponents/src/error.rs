use thiserror::Error;

use crate::profile::ProfileKind;

/// Errors raised by growth profiles, exponent estimators, and walk models.
#[derive(Debug, Error)]
pub enum GrowthError {
    /// A scalar argument violated a precondition.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An estimator was given too little data to produce a slope.
    #[error("{what} needs at least {needed} points, got {got}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    /// A profile arrived with cutoffs in the wrong normalization.
    #[error("expected a {expected} profile, got {got}")]
    KindMismatch {
        expected: ProfileKind,
        got: ProfileKind,
    },

    /// A walk length outside the supported range.
    #[error("step count {steps} not in 1..={max}")]
    StepsOutOfRange { steps: u32, max: u32 },

    /// A tower level whose mass power leaves the finite range.
    #[error("tower level {level}: lambda^{power} is not finite in f64")]
    TowerOverflow { level: usize, power: usize },

    /// A CSV line that does not parse as `s,count`.
    #[error("profile csv line {line}: {reason}")]
    CsvParse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, GrowthError>;
