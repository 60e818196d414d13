use gaussian_core::{mc_over_substreams, McEstimate};
use rand::Rng;

use crate::error::{CantorError, Result};
use crate::psequence::PSequence;
use crate::spectral::truncate_to_spectral;
use crate::terms::RTerms;

const PI: f64 = std::f64::consts::PI;
/// Digit depth for Monte Carlo positions; beyond this the digit sum is
/// unresolvable in `f64`.
const MC_DIGITS: u64 = 60;
/// Relative slack absorbing rounding in the interval envelopes.
const BRACKET_SLACK: f64 = 1e-9;

/// The squared cocycle norm `|c_a|^2` evaluated three independent ways.
#[derive(Clone, Debug)]
pub struct CocycleNorm {
    /// Atom sum over the level truncation of the measure.
    pub truncated: f64,
    /// Monte Carlo average of `sin^2(pi a theta) / sin^2(pi theta)` over the
    /// full measure.
    pub mc: McEstimate,
    /// Rigorous enclosure of the full-measure integral; the truncated atom
    /// sum obeys the same cylinder envelopes, so it lands inside too.
    /// `None` when `|a| > 2 * 3^level` leaves the cylinders uninformative.
    pub bracket: Option<(f64, f64)>,
    pub diagnostic: String,
}

/// Evaluates `|c_a|^2 = integral sin^2(pi a theta) / sin^2(pi theta) d nu`.
///
/// The bracket combines per-cylinder interval envelopes at the truncation
/// level with the series cap `4 delta^{-1} sum_{m<=n} r_m`, minimized over
/// admissible `n` with `|a| <= 2 * 3^n` and `p_n <= 1 - delta`.
pub fn cocycle_norm(
    p: &PSequence,
    a: i64,
    level: u32,
    samples: u64,
    seed: u64,
) -> Result<CocycleNorm> {
    if a == 0 {
        return Err(CantorError::InvalidParameter {
            name: "a",
            reason: "frequency must be nonzero".into(),
        });
    }
    if samples < 2 {
        return Err(CantorError::InvalidParameter {
            name: "samples",
            reason: "need at least 2".into(),
        });
    }
    let set = truncate_to_spectral(p, level)?;
    let a_abs = a.unsigned_abs();
    let a_sq = (a as f64) * (a as f64);

    // Atom sum over the truncation, compensated.
    let mut truncated = 0.0f64;
    let mut comp = 0.0f64;
    for atom in set.atoms() {
        let folded = if atom.t == 0.0 { atom.weight } else { 2.0 * atom.weight };
        let y = folded * ratio_sq(a, atom.t) - comp;
        let t = truncated + y;
        comp = (t - truncated) - y;
        truncated = t;
    }

    // Monte Carlo over the full measure via direct digit sampling.
    let deep = p.with_max_index(MC_DIGITS.max(p.max_index()))?;
    let probs: Vec<f64> = (1..=MC_DIGITS)
        .map(|m| deep.p(m))
        .collect::<Result<_>>()?;
    let mc = mc_over_substreams(seed, samples, move |rng| {
        let mut theta = 0.0f64;
        for &pm in probs.iter().rev() {
            let u: f64 = rng.random();
            let digit = if u < pm {
                0.0
            } else if u < pm + (1.0 - pm) * 0.5 {
                1.0
            } else {
                -1.0
            };
            theta = (theta + digit) / 3.0;
        }
        ratio_sq(a, theta)
    })
    .estimate();

    // Cylinder envelopes: each level-`level` cylinder is an interval of
    // half-width `3^{-level} / 2` around its atom, carrying exactly the atom
    // weight; the integrand is bounded there by interval arithmetic and the
    // global bound `a^2`.
    let half_width = 0.5 * 3f64.powi(-(level as i32));
    if a_abs > 2 * 3u64.pow(level) {
        return Ok(CocycleNorm {
            truncated,
            mc,
            bracket: None,
            diagnostic: format!(
                "|a| = {a_abs} exceeds 2 * 3^{level}; cylinder envelopes are \
                 uninformative at this truncation"
            ),
        });
    }
    let mut env_lo = 0.0f64;
    let mut lo_comp = 0.0f64;
    let mut env_hi = 0.0f64;
    let mut hi_comp = 0.0f64;
    let af = a as f64;
    for atom in set.atoms() {
        let folded = if atom.t == 0.0 { atom.weight } else { 2.0 * atom.weight };
        let t_lo = atom.t - half_width;
        let t_hi = atom.t + half_width;
        let (num_lo, num_hi) = sin_sq_range(af * t_lo, af * t_hi);
        let den_lo_t = t_lo.max(0.0);
        // sin^2 is increasing on [0, 1/2], where every |theta| lives.
        let den_lo = sin_pi_sq(den_lo_t);
        let den_hi = sin_pi_sq(t_hi);
        let cyl_hi = if den_lo == 0.0 {
            a_sq
        } else {
            a_sq.min(num_hi / den_lo)
        };
        let cyl_lo = if den_hi == 0.0 { 0.0 } else { num_lo / den_hi };
        let y = folded * cyl_lo - lo_comp;
        let t = env_lo + y;
        lo_comp = (t - env_lo) - y;
        env_lo = t;
        let y = folded * cyl_hi - hi_comp;
        let t = env_hi + y;
        hi_comp = (t - env_hi) - y;
        env_hi = t;
    }

    // Series cap over admissible indices.
    let mut cap = f64::INFINITY;
    let mut cap_n = 0u64;
    let mut partial = 0.0f64;
    let mut pow3 = 1u64;
    for (i, term) in RTerms::new(p).take(level as usize).enumerate() {
        let n = i as u64 + 1;
        partial += term?;
        pow3 = pow3.saturating_mul(3);
        let pn = p.p(n)?;
        if a_abs <= 2 * pow3 && pn < 1.0 {
            let bound = 4.0 * partial / (1.0 - pn);
            if bound < cap {
                cap = bound;
                cap_n = n;
            }
        }
    }

    let lo = env_lo * (1.0 - BRACKET_SLACK);
    let hi = env_hi.min(cap) * (1.0 + BRACKET_SLACK);
    let diagnostic = if cap.is_finite() {
        format!(
            "envelope [{env_lo:.6e}, {env_hi:.6e}]; series cap {cap:.6e} at n = {cap_n}"
        )
    } else {
        format!("envelope [{env_lo:.6e}, {env_hi:.6e}]; no admissible series cap")
    };
    Ok(CocycleNorm {
        truncated,
        mc,
        bracket: Some((lo, hi)),
        diagnostic,
    })
}

/// `sin^2(pi a t) / sin^2(pi t)`, extended by continuity to `a^2` at `t = 0`.
fn ratio_sq(a: i64, t: f64) -> f64 {
    let den = (PI * t).sin();
    if den == 0.0 {
        let af = a as f64;
        af * af
    } else {
        let num = (PI * a as f64 * t).sin();
        (num / den).powi(2)
    }
}

fn sin_pi_sq(u: f64) -> f64 {
    let s = (PI * u).sin();
    s * s
}

/// Range of `sin^2(pi u)` over `u in [lo, hi]`.
fn sin_sq_range(lo: f64, hi: f64) -> (f64, f64) {
    debug_assert!(lo <= hi);
    if hi - lo >= 1.0 {
        return (0.0, 1.0);
    }
    let base = lo.floor();
    let l = lo - base;
    let h = hi - base;
    // Now 0 <= l < 1 and l <= h < 2; sin^2 rises on [0, 1/2], falls on
    // [1/2, 1], and vanishes at integers.
    if h >= 1.0 {
        let max = if l <= 0.5 || h - 1.0 >= 0.5 {
            1.0
        } else {
            sin_pi_sq(l).max(sin_pi_sq(h - 1.0))
        };
        (0.0, max)
    } else {
        let end_min = sin_pi_sq(l).min(sin_pi_sq(h));
        let max = if l <= 0.5 && h >= 0.5 {
            1.0
        } else {
            sin_pi_sq(l).max(sin_pi_sq(h))
        };
        (end_min, max)
    }
}
