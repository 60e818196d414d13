//! Spectral measures of ternary Cantor type and the certificates attached to
//! them.
//!
//! A parameter sequence `p` in `[0, 1]` defines a symmetric probability
//! measure on the circle as the distribution of `theta = sum_m d_m 3^{-m}`,
//! where the ternary digits `d_m` are independent and `d_m` is `0` with
//! probability `p_m` and `+1` or `-1` with probability `(1 - p_m) / 2` each.
//! The measure drives a Gaussian action of the integers whose additive
//! cocycle has one-parameter norms
//!
//! ```text
//! |c_a|^2 = integral of sin^2(pi a theta) / sin^2(pi theta) d nu(theta).
//! ```
//!
//! This crate evaluates those norms three independent ways (atom sums on a
//! finite truncation, Monte Carlo over the full measure, and rigorous
//! interval brackets), computes the digit-product correlations
//! `integral cos(2 pi a theta) d nu`, and certifies the two series criteria
//! that decide whether the cocycle is a coboundary and whether the associated
//! nonsingular action admits the expected ergodic behaviour.

pub mod certificates;
pub mod cocycle;
pub mod correlation;
pub mod error;
pub mod psequence;
pub mod spectral;
pub mod terms;

pub use certificates::{
    coboundary_report, condition_ratio, near_one_window, CertificateReport, Verdict,
};
pub use cocycle::{cocycle_norm, CocycleNorm};
pub use correlation::{correlation, correlation_mc, Correlation};
pub use error::{CantorError, Result};
pub use psequence::{PRule, PSequence};
pub use spectral::{truncate_to_spectral, SpectralAtom, SpectralAtomSet, TernaryAngle};
pub use terms::{r_partial_sums, r_term, RTerms};
