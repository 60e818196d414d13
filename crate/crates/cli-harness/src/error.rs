//! Harness errors and the process exit-code contract.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric guard refusal,
//! 4 acceptance-suite failure. IO failures use the conventional 1.

use std::path::{Path, PathBuf};

use cantor_spectral::CantorError;
use dynamics_sim::DynError;
use gaussian_core::GaussError;
use growth_exponents::GrowthError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad configuration. `location` is `file:line` when a config file is
    /// involved, otherwise the flag or environment variable at fault.
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    /// A computation crate refused the run to protect numerical validity.
    #[error("numeric guard [{guard}]: {message}")]
    Guard { guard: &'static str, message: String },

    /// One or more acceptance criteria failed.
    #[error("{failed} of {total} acceptance criteria failed")]
    Acceptance { failed: usize, total: usize },

    /// Input tables disagree on layout while being merged.
    #[error("schema mismatch in {path}: {reason}")]
    Schema { path: String, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        HarnessError::Config {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config { .. } | HarnessError::Schema { .. } => 2,
            HarnessError::Guard { .. } => 3,
            HarnessError::Acceptance { .. } => 4,
            HarnessError::Io { .. } => 1,
        }
    }
}

// Module errors are split into two classes: caps that protect numerical
// validity map to guard failures (exit 3); everything else means the request
// itself was inconsistent and maps to a configuration error (exit 2).

fn config_class(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::config("parameters", e.to_string())
}

impl From<GaussError> for HarnessError {
    fn from(e: GaussError) -> Self {
        let guard = match &e {
            GaussError::NotAContraction { .. } => Some("operator-norm"),
            GaussError::NotPositiveSemidefinite { .. } => Some("psd"),
            GaussError::GridTooCoarse { .. } => Some("grid-step"),
            GaussError::GridTooShort => Some("grid-span"),
            GaussError::NonFinite { .. } => Some("finite-value"),
            _ => None,
        };
        match guard {
            Some(guard) => HarnessError::Guard {
                guard,
                message: e.to_string(),
            },
            None => config_class(e),
        }
    }
}

impl From<DynError> for HarnessError {
    fn from(e: DynError) -> Self {
        match e {
            DynError::FrequencyTooLarge { .. } => HarnessError::Guard {
                guard: "frequency-cap",
                message: e.to_string(),
            },
            DynError::VarianceGuard { .. } => HarnessError::Guard {
                guard: "variance",
                message: e.to_string(),
            },
            DynError::Callback { .. } => HarnessError::Guard {
                guard: "callback-bound",
                message: e.to_string(),
            },
            DynError::Spectral(inner) => inner.into(),
            other => config_class(other),
        }
    }
}

impl From<CantorError> for HarnessError {
    fn from(e: CantorError) -> Self {
        match &e {
            CantorError::MassMismatch { .. } => HarnessError::Guard {
                guard: "atom-mass",
                message: e.to_string(),
            },
            _ => config_class(e),
        }
    }
}

impl From<GrowthError> for HarnessError {
    fn from(e: GrowthError) -> Self {
        match &e {
            GrowthError::TowerOverflow { .. } => HarnessError::Guard {
                guard: "tower-overflow",
                message: e.to_string(),
            },
            GrowthError::StepsOutOfRange { .. } => HarnessError::Guard {
                guard: "step-cap",
                message: e.to_string(),
            },
            _ => config_class(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(HarnessError::config("x", "y").exit_code(), 2);
        let guard: HarnessError = DynError::FrequencyTooLarge { a: 1 << 41 }.into();
        assert_eq!(guard.exit_code(), 3);
        assert!(matches!(guard, HarnessError::Guard { guard: "frequency-cap", .. }));
        assert_eq!(
            HarnessError::Acceptance {
                failed: 1,
                total: 7
            }
            .exit_code(),
            4
        );
    }

    #[test]
    fn parameter_inconsistencies_are_config_class() {
        let e: HarnessError = CantorError::InvalidProbability {
            index: 3,
            value: 1.5,
        }
        .into();
        assert_eq!(e.exit_code(), 2);
        let e: HarnessError = DynError::Spectral(CantorError::LevelOutOfRange {
            level: 99,
            max: 13,
        })
        .into();
        assert_eq!(e.exit_code(), 2);
    }
}
