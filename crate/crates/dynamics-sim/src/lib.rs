//! Exact finite-dimensional nonsingular Gaussian actions of the integers.
//!
//! An action is a family of orthogonal block rotations `pi(a)` plus an
//! affine cocycle translation `scale * c_a`, everything about step `a`
//! evaluated in closed form per block. On top of that the crate provides
//!
//! - Radon-Nikodym cocycles `omega(a, x) = d(a^{-1} mu)/d mu` and the
//!   negative-moment identity `E[omega^{-beta}] = e^{beta(beta+1) sigma^2/2}`,
//! - Hurewicz ratio averages over symmetric windows with log-sum-exp
//!   weighting, and an independent circle-quadrature oracle for the
//!   fixed-point case,
//! - the Maharam extension and an empirical (diagnostic-only) log-density
//!   histogram,
//! - the infinite-measure-preserving skew product and its recurrence
//!   statistics,
//! - the two ergodicity-criterion functionals (integer actions via
//!   correlation/norm tables, general groups via enumerated sets), and
//! - the density-fraction bound used by the ratio-set analysis, in both its
//!   plain and Maharam-weighted forms.

pub mod action;
pub mod criteria;
pub mod error;
pub mod fraction;
pub mod hurewicz;
pub mod maharam_ext;
pub mod moment;
pub mod skew;

pub use action::{AffineZAction, Block, Turns, MAX_FREQUENCY, MAX_TURNS_LEVEL};
pub use criteria::{
    criterion_general, criterion_z, qualifying_witnesses, ZCriterionData, FAILS_ABOVE, HOLDS_BELOW,
};
pub use error::{DynError, Result};
pub use fraction::{fraction_bound_check, FractionBound};
pub use hurewicz::{circle_quadrature_oracle, hurewicz_average, RatioAverageReport};
pub use maharam_ext::{maharam_orbit_step, ratio_set_histogram, RatioSetHistogram};
pub use moment::{moment_identity_check, MomentCheck, BETA_LIMIT, SIGMA_LIMIT};
pub use skew::{skew_simulate, SkewPoint, SkewReport, GAP_QUANTILES};
