use thiserror::Error;

/// Errors raised by Cantor-measure constructions and certificates.
#[derive(Debug, Error)]
pub enum CantorError {
    /// A parameter sequence was queried outside its declared range.
    #[error("index {index} outside 1..={max_index}")]
    IndexOutOfRange { index: u64, max_index: u64 },

    /// A probability parameter left the unit interval.
    #[error("p_{index} = {value} is not in [0, 1]")]
    InvalidProbability { index: u64, value: f64 },

    /// A scalar argument violated a precondition.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Too few product terms requested for the target frequency.
    #[error("frequency {a} needs at least {required} terms, got {got}")]
    TermsTooSmall { a: i64, required: u64, got: u64 },

    /// A truncation level outside the supported range.
    #[error("truncation level {level} not in 1..={max}")]
    LevelOutOfRange { level: u32, max: u32 },

    /// Atom weights failed the unit-mass invariant.
    #[error("atom masses sum to {total}, expected 1 within 1e-12")]
    MassMismatch { total: f64 },
}

pub type Result<T> = std::result::Result<T, CantorError>;
