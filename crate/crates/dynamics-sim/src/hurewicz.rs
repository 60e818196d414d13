use std::f64::consts::TAU;

use gaussian_core::RealVector;

use crate::action::AffineZAction;
use crate::error::{DynError, Result};

/// Streaming log-sum-exp: the state `(max, sum)` represents
/// `log Sigma exp(x_i) = max + log(sum)` with `sum = Sigma exp(x_i - max)`.
#[derive(Clone, Copy, Debug)]
struct LogSum {
    max: f64,
    sum: f64,
}

impl LogSum {
    fn new() -> Self {
        LogSum {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    fn push(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v <= self.max {
            self.sum += (v - self.max).exp();
        } else if self.max == f64::NEG_INFINITY {
            self.max = v;
            self.sum = 1.0;
        } else {
            self.sum = self.sum * (self.max - v).exp() + 1.0;
            self.max = v;
        }
    }

    fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

/// State of a Hurewicz ratio average over the symmetric windows `[-n, n]`,
/// with the signed numerator split into positive and negative parts so the
/// running estimate stays finite however widely the weights spread.
#[derive(Clone, Debug)]
pub struct RatioAverageReport {
    /// Final window radius.
    pub n: u64,
    /// `Sigma omega(a, x) F(a . x)` over the final window; may overflow to
    /// `+-inf` for extreme scales, unlike the estimate.
    pub numerator: f64,
    /// `Sigma omega(a, x)` over the final window; at least `omega(0) = 1`.
    pub denominator: f64,
    /// Log-domain ratio, always finite for bounded `F`.
    pub estimate: f64,
    /// `(n, estimate)` checkpoints, dense for small `n` then decimated.
    pub history: Vec<(u64, f64)>,
}

fn signed_ratio(den: &LogSum, pos: &LogSum, neg: &LogSum) -> f64 {
    let ld = den.value();
    let lp = pos.value();
    let ln_ = neg.value();
    if lp == f64::NEG_INFINITY && ln_ == f64::NEG_INFINITY {
        return 0.0;
    }
    if ln_ == f64::NEG_INFINITY {
        return (lp - ld).exp();
    }
    if lp == f64::NEG_INFINITY {
        return -(ln_ - ld).exp();
    }
    let (hi, lo, sign) = if lp >= ln_ {
        (lp, ln_, 1.0)
    } else {
        (ln_, lp, -1.0)
    };
    sign * (hi - ld).exp() * (-(lo - hi).exp_m1())
}

fn signed_sum(pos: &LogSum, neg: &LogSum) -> f64 {
    let lp = pos.value();
    let ln_ = neg.value();
    if lp == f64::NEG_INFINITY && ln_ == f64::NEG_INFINITY {
        return 0.0;
    }
    if ln_ == f64::NEG_INFINITY {
        return lp.exp();
    }
    if lp == f64::NEG_INFINITY {
        return -ln_.exp();
    }
    let (hi, lo, sign) = if lp >= ln_ {
        (lp, ln_, 1.0)
    } else {
        (ln_, lp, -1.0)
    };
    sign * hi.exp() * (-(lo - hi).exp_m1())
}

/// Ratio ergodic average `Sigma_{|a| <= n} omega(a, x) F(a . x) /
/// Sigma_{|a| <= n} omega(a, x)` for `n` up to `n_max`, all weights and
/// orbit points in closed form per `a`.
///
/// `f_bound` is the caller-declared bound on `|F|`; an evaluation outside
/// it (or non-finite) aborts with an error rather than poisoning the sums.
/// With `F = 1` the numerator and denominator accumulators receive
/// identical pushes, so the estimate is exactly `1` at every checkpoint.
pub fn hurewicz_average<F>(
    action: &AffineZAction,
    f: F,
    f_bound: f64,
    x: &RealVector,
    n_max: u64,
) -> Result<RatioAverageReport>
where
    F: Fn(&RealVector) -> f64,
{
    if !(f_bound.is_finite() && f_bound > 0.0) {
        return Err(DynError::InvalidParameter {
            name: "f_bound",
            reason: format!("must be finite and positive, got {f_bound}"),
        });
    }
    AffineZAction::check_frequency(n_max as i64)?;
    let mut den = LogSum::new();
    let mut pos = LogSum::new();
    let mut neg = LogSum::new();
    let mut history = Vec::new();
    let step = (n_max / 1024).max(1);
    for n in 0..=n_max {
        let ends = if n == 0 { 0..=0 } else { 0..=1 };
        for side in ends {
            let a = if side == 0 { n as i64 } else { -(n as i64) };
            let lw = action.rn_log(a, x)?;
            let fv = f(&action.act(a, x)?);
            if !fv.is_finite() || fv.abs() > f_bound {
                return Err(DynError::Callback {
                    reason: format!("F(a . x) = {fv} at a = {a} violates declared bound {f_bound}"),
                });
            }
            den.push(lw);
            if fv > 0.0 {
                pos.push(lw + fv.ln());
            } else if fv < 0.0 {
                neg.push(lw + (-fv).ln());
            }
        }
        if n <= 64 || n % step == 0 || n == n_max {
            history.push((n, signed_ratio(&den, &pos, &neg)));
        }
    }
    let estimate = signed_ratio(&den, &pos, &neg);
    Ok(RatioAverageReport {
        n: n_max,
        numerator: signed_sum(&pos, &neg),
        denominator: den.value().exp(),
        estimate,
        history,
    })
}

/// Independent oracle for the fixed-point case: the Gaussian-weighted mean
/// of `f` over the circle `{center + R_theta u}` by trapezoid quadrature
/// (periodic integrand, so the rule is spectrally accurate).
///
/// For a single rotation block with fixed point `xi` (cocycle generator
/// `(I - R) xi`, scaled fixed point `center = scale * xi`), the Hurewicz
/// weights are proportional to the standard Gaussian density along the
/// orbit circle, so the average converges to exactly this quantity.
pub fn circle_quadrature_oracle<F>(center: [f64; 2], u: [f64; 2], f: F, points: usize) -> Result<f64>
where
    F: Fn(&RealVector) -> f64,
{
    if points < 8 {
        return Err(DynError::InvalidParameter {
            name: "points",
            reason: "need at least 8 quadrature points".into(),
        });
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..points {
        let theta = TAU * j as f64 / points as f64;
        let (s, c) = theta.sin_cos();
        let y = RealVector::new(vec![
            center[0] + c * u[0] - s * u[1],
            center[1] + s * u[0] + c * u[1],
        ]);
        let w = (-0.5 * y.norm_sq()).exp();
        num += w * f(&y);
        den += w;
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{Block, Turns};
    use num_complex::Complex64;

    #[test]
    fn logsum_matches_naive() {
        let xs = [0.3, -700.0, 12.5, 12.5, -0.1, 699.0, 3.0];
        let mut acc = LogSum::new();
        for &x in &xs {
            acc.push(x);
        }
        let max = 699.0f64;
        let naive = max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
        assert!((acc.value() - naive).abs() <= 1e-12);
    }

    fn small_action() -> AffineZAction {
        AffineZAction::new(
            vec![
                Block::Rotation {
                    turns: Turns::Real(0.31),
                    gen: Complex64::new(0.4, -0.1),
                },
                Block::Trivial { gen: 0.2 },
            ],
            0.6,
        )
        .unwrap()
    }

    #[test]
    fn constant_one_is_exactly_one() {
        let action = small_action();
        let x = RealVector::new(vec![0.7, -0.2, 1.1]);
        let report = hurewicz_average(&action, |_| 1.0, 2.0, &x, 500).unwrap();
        assert_eq!(report.estimate, 1.0);
        assert!(report.history.iter().all(|&(_, e)| e == 1.0));
        assert!(report.denominator >= 1.0);
    }

    #[test]
    fn bound_violation_is_an_error() {
        let action = small_action();
        let x = RealVector::new(vec![0.7, -0.2, 1.1]);
        let err = hurewicz_average(&action, |y| y.coords()[2], 1e-3, &x, 10).unwrap_err();
        assert!(matches!(err, DynError::Callback { .. }));
    }

    #[test]
    fn quadrature_oracle_value_is_frozen() {
        // Fixed-point data used by the integration suite: angle sqrt(2)-1
        // turns, xi = (0.8, 0.3), scale 0.75, x0 = (1.1, -0.4), F = y_1.
        let center = [0.75 * 0.8, 0.75 * 0.3];
        let u = [1.1 - center[0], -0.4 - center[1]];
        let v = circle_quadrature_oracle(center, u, |y| y.coords()[0], 4096).unwrap();
        assert!((v - 0.4138669417682392).abs() <= 1e-12, "{v}");
        // Doubling the grid does not move a spectrally converged value.
        let v2 = circle_quadrature_oracle(center, u, |y| y.coords()[0], 8192).unwrap();
        assert!((v - v2).abs() <= 1e-13);
    }
}
