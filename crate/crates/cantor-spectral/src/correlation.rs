use gaussian_core::{mc_over_substreams, McEstimate};
use rand::Rng;

use crate::error::{CantorError, Result};
use crate::psequence::PSequence;

const TAU: f64 = std::f64::consts::TAU;
/// Extra digits sampled beyond the product truncation, enough to exhaust
/// `f64` resolution of the digit sum.
const MC_EXTRA_DIGITS: u64 = 40;

/// Truncated correlation `integral cos(2 pi a theta) d nu` with a rigorous
/// bound on the discarded tail factors.
#[derive(Clone, Copy, Debug)]
pub struct Correlation {
    /// `prod_{m<=terms} [p_m + (1 - p_m) cos(2 pi a 3^{-m})]`.
    pub value: f64,
    /// `|full - value| <= tail_bound`, from `1 - cos x <= x^2 / 2` on the
    /// factors beyond the truncation.
    pub tail_bound: f64,
    pub terms: u64,
}

/// Evaluates the digit-product form of the correlation at frequency `a`.
///
/// Requires `terms >= ceil(log3 |a|) + 5` so every discarded factor is close
/// to one; the product itself is carried as a sign and a compensated log.
pub fn correlation(p: &PSequence, a: i64, terms: u64) -> Result<Correlation> {
    let required = min_terms(a)?;
    if terms < required {
        return Err(CantorError::TermsTooSmall {
            a,
            required,
            got: terms,
        });
    }
    let mut sign = 1.0f64;
    let mut log_abs = 0.0f64;
    let mut comp = 0.0f64;
    let mut zero = false;
    for m in 1..=terms {
        let pm = p.p(m)?;
        let factor = pm + (1.0 - pm) * (TAU * reduced_fraction(a, m as u32)).cos();
        if factor == 0.0 {
            zero = true;
            break;
        }
        sign *= factor.signum();
        let y = factor.abs().ln() - comp;
        let t = log_abs + y;
        comp = (t - log_abs) - y;
        log_abs = t;
    }
    let value = if zero { 0.0 } else { sign * log_abs.exp() };
    // sum_{m > T} 2 (pi a 3^{-m})^2 = pi^2 a^2 9^{-T} / 4; exp_m1 converts
    // the factor-wise bound into a bound on the product.
    let s = std::f64::consts::PI.powi(2) * (a as f64).powi(2) * 9f64.powi(-(terms as i32)) / 4.0;
    Ok(Correlation {
        value,
        tail_bound: s.exp_m1(),
        terms,
    })
}

/// Monte Carlo oracle for the same correlation: samples the ternary digits
/// directly and averages `cos(2 pi a theta)`.
///
/// Digits run `MC_EXTRA_DIGITS` past the product truncation, so the estimate
/// targets the full measure up to `f64` resolution.
pub fn correlation_mc(
    p: &PSequence,
    a: i64,
    terms: u64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    let required = min_terms(a)?;
    if terms < required {
        return Err(CantorError::TermsTooSmall {
            a,
            required,
            got: terms,
        });
    }
    if samples < 2 {
        return Err(CantorError::InvalidParameter {
            name: "samples",
            reason: "need at least 2".into(),
        });
    }
    let depth = terms + MC_EXTRA_DIGITS;
    let extended = p.with_max_index(depth.max(p.max_index()))?;
    let probs: Vec<f64> = (1..=depth)
        .map(|m| extended.p(m))
        .collect::<Result<_>>()?;
    let af = a as f64;
    Ok(mc_over_substreams(seed, samples, move |rng| {
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
        (TAU * af * theta).cos()
    })
    .estimate())
}

/// Smallest admissible truncation for frequency `a`.
fn min_terms(a: i64) -> Result<u64> {
    if a == 0 {
        return Err(CantorError::InvalidParameter {
            name: "a",
            reason: "frequency must be nonzero".into(),
        });
    }
    let mut e = 0u64;
    let mut pow = 1u64;
    while pow < a.unsigned_abs() {
        pow = pow.saturating_mul(3);
        e += 1;
    }
    Ok(e + 5)
}

/// `a 3^{-m} mod 1`, reduced exactly in integers while `3^m` fits `i128`.
fn reduced_fraction(a: i64, m: u32) -> f64 {
    if m <= 39 {
        let pow = 3i128.pow(m);
        (a as i128).rem_euclid(pow) as f64 / pow as f64
    } else {
        a as f64 * 3f64.powi(-(m as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psequence::PRule;

    #[test]
    fn full_weight_cantor_correlation_matches_reference() {
        // p identically zero puts full weight on the digits +-1.
        let p = PSequence::constant(0.0, 100).unwrap();
        for a in [1i64, 3, 9, 27] {
            // Scaling a by 3 shifts the factor index, so all four agree.
            let c = correlation(&p, a, 25).unwrap();
            assert!((c.value - -0.37143735670876564).abs() <= 1e-12);
        }
        let c2 = correlation(&p, 2, 25).unwrap();
        assert!((c2.value - -0.076_541_712_728_668_36).abs() <= 1e-12);
    }

    #[test]
    fn sparse_square_correlations_match_reference() {
        let p = PSequence::example83(100).unwrap();
        let expect = [
            (1i64, -0.497_470_749_275_157),
            (3, 0.973_044_728_711_909_7),
            (9, 0.7660439230333009),
            (27, -0.499_964_494_253_291_7),
        ];
        for (a, value) in expect {
            let c = correlation(&p, a, 20).unwrap();
            assert!(
                (c.value - value).abs() <= 1e-12 + c.tail_bound,
                "a = {a}: {} vs {value}",
                c.value
            );
        }
    }

    #[test]
    fn tripling_the_frequency_shifts_the_parameter_index() {
        let p = PSequence::new(
            PRule::List {
                values: vec![0.3, 0.6, 0.8],
                tail: 0.5,
            },
            64,
        )
        .unwrap();
        let shifted = PSequence::new(
            PRule::List {
                values: vec![0.6, 0.8],
                tail: 0.5,
            },
            64,
        )
        .unwrap();
        for a in [1i64, 2, 4, 5] {
            let lhs = correlation(&p, 3 * a, 13).unwrap().value;
            let rhs = correlation(&shifted, a, 12).unwrap().value;
            assert!((lhs - rhs).abs() <= 1e-15, "a = {a}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn vanishing_factor_collapses_the_product() {
        // p_1 = 1/3 against cos(2 pi / 3) = -1/2 kills the first factor up
        // to the rounding of the cosine itself.
        let p = PSequence::new(
            PRule::List {
                values: vec![1.0 / 3.0],
                tail: 0.5,
            },
            64,
        )
        .unwrap();
        assert!(correlation(&p, 1, 10).unwrap().value.abs() <= 1e-15);
    }

    #[test]
    fn sign_tracked_product_matches_naive_loop() {
        let p = PSequence::new(
            PRule::List {
                values: vec![0.0, 0.2],
                tail: 0.35,
            },
            64,
        )
        .unwrap();
        let c = correlation(&p, 1, 18).unwrap();
        let mut naive = 1.0f64;
        for m in 1..=18u32 {
            let pm = p.p(m as u64).unwrap();
            naive *= pm + (1.0 - pm) * (TAU * 3f64.powi(-(m as i32))).cos();
        }
        assert!(c.value < 0.0);
        assert!((c.value - naive).abs() <= 1e-14);
    }

    #[test]
    fn monte_carlo_agrees_with_product_within_tolerance() {
        let p = PSequence::constant(0.4, 64).unwrap();
        let product = correlation(&p, 2, 12).unwrap();
        let mc = correlation_mc(&p, 2, 12, 400_000, 72_201).unwrap();
        let slack = 3.0 * mc.std_error + product.tail_bound;
        assert!(
            (mc.value - product.value).abs() <= slack,
            "{} vs {} (slack {slack})",
            mc.value,
            product.value
        );
    }

    #[test]
    fn frequency_and_truncation_guards() {
        let p = PSequence::constant(0.0, 100).unwrap();
        assert!(matches!(
            correlation(&p, 0, 10),
            Err(CantorError::InvalidParameter { .. })
        ));
        // |a| = 27 needs ceil(log3 27) + 5 = 8 terms.
        assert!(matches!(
            correlation(&p, 27, 7),
            Err(CantorError::TermsTooSmall { required: 8, .. })
        ));
        assert!(correlation(&p, 27, 8).is_ok());
    }
}
