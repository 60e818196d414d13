use gaussian_core::{maharam_action_step, MaharamPoint, ZAffineAction};

use crate::action::AffineZAction;
use crate::error::{DynError, Result};

/// One step of the Maharam extension of the scaled action:
/// `(x, s) -> (a . x, s + log omega(a, x))`.
pub fn maharam_orbit_step(
    action: &AffineZAction,
    a: i64,
    p: &MaharamPoint,
) -> Result<MaharamPoint> {
    AffineZAction::check_frequency(a)?;
    if p.x.dim() != action.dim() {
        return Err(DynError::DimensionMismatch {
            expected: action.dim(),
            got: p.x.dim(),
        });
    }
    Ok(maharam_action_step(action, action.scale(), a, p))
}

/// Empirical distribution of the accumulated log-densities
/// `log omega(k, x0)`, `k = 1..steps`, reduced mod `modulus`.
///
/// A lattice-concentrated histogram is weak evidence for a discrete ratio
/// set, a flat one for a dense ratio set; the report is a diagnostic about
/// a finite truncation and never a Krieger-type classification.
#[derive(Clone, Debug)]
pub struct RatioSetHistogram {
    pub modulus: f64,
    pub bin_counts: Vec<u64>,
    /// Steps whose unreduced log-density lies in `[-window, window]`.
    pub within_window: u64,
    pub window: f64,
    pub steps: u64,
    pub diagnostic: String,
}

pub fn ratio_set_histogram(
    action: &AffineZAction,
    x0: &gaussian_core::RealVector,
    steps: u64,
    modulus: f64,
    bins: usize,
    window: f64,
) -> Result<RatioSetHistogram> {
    if !(modulus.is_finite() && modulus > 0.0) {
        return Err(DynError::InvalidParameter {
            name: "modulus",
            reason: format!("must be finite and positive, got {modulus}"),
        });
    }
    if bins == 0 {
        return Err(DynError::InvalidParameter {
            name: "bins",
            reason: "need at least one bin".into(),
        });
    }
    if !(window.is_finite() && window >= 0.0) {
        return Err(DynError::InvalidParameter {
            name: "window",
            reason: format!("must be finite and >= 0, got {window}"),
        });
    }
    if steps == 0 {
        return Err(DynError::InvalidParameter {
            name: "steps",
            reason: "need at least one step".into(),
        });
    }
    let mut bin_counts = vec![0u64; bins];
    let mut within_window = 0u64;
    for k in 1..=steps {
        // Accumulated value along the orbit = log omega(k, x0) by the chain
        // rule, evaluated in closed form so no error builds up.
        let r = action.rn_log(k as i64, x0)?;
        let idx = ((r.rem_euclid(modulus) / modulus) * bins as f64) as usize;
        bin_counts[idx.min(bins - 1)] += 1;
        if r.abs() <= window {
            within_window += 1;
        }
    }
    Ok(RatioSetHistogram {
        modulus,
        bin_counts,
        within_window,
        window,
        steps,
        diagnostic: format!(
            "log-density values mod {modulus} over {steps} steps; empirical lattice indicator \
             for a finite truncation, not a type classification"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{Block, Turns};
    use gaussian_core::RealVector;
    use num_complex::Complex64;

    fn mixed_action(scale: f64) -> AffineZAction {
        AffineZAction::new(
            vec![
                Block::Rotation {
                    turns: Turns::Real(0.37),
                    gen: Complex64::new(0.5, 0.2),
                },
                Block::Trivial { gen: 0.3 },
            ],
            scale,
        )
        .unwrap()
    }

    #[test]
    fn scale_zero_keeps_height_constant() {
        let action = mixed_action(0.0);
        let mut p = MaharamPoint {
            x: RealVector::new(vec![0.4, -0.9, 1.3]),
            t: 0.25,
        };
        for a in [1i64, -3, 7] {
            p = maharam_orbit_step(&action, a, &p).unwrap();
            assert_eq!(p.t, 0.25);
        }
    }

    #[test]
    fn two_steps_compose_via_chain_rule() {
        let action = mixed_action(0.8);
        let p = MaharamPoint {
            x: RealVector::new(vec![0.4, -0.9, 1.3]),
            t: -0.1,
        };
        for (a, b) in [(3i64, 5i64), (-4, 9), (11, -2)] {
            let two = maharam_orbit_step(&action, b, &maharam_orbit_step(&action, a, &p).unwrap())
                .unwrap();
            let one = maharam_orbit_step(&action, a + b, &p).unwrap();
            assert!(two.x.sub(&one.x).norm() <= 1e-10);
            assert!((two.t - one.t).abs() <= 1e-10);
        }
    }

    #[test]
    fn trivial_drift_escapes_every_window() {
        // Pure drift block: log omega(k) = -(scale k g)^2/2 - scale k g x0,
        // so only finitely many steps can stay inside any fixed window.
        let action = AffineZAction::new(vec![Block::Trivial { gen: 0.3 }], 1.0).unwrap();
        let x0 = RealVector::new(vec![0.5]);
        let hist = ratio_set_histogram(&action, &x0, 5000, 2.0, 16, 1.0).unwrap();
        assert!(hist.within_window < 40, "{}", hist.within_window);
        assert_eq!(hist.bin_counts.iter().sum::<u64>(), 5000);
        assert!(hist.diagnostic.contains("not a type classification"));
    }
}
