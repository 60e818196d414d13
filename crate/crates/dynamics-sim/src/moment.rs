use gaussian_core::{
    mc_over_substreams, rn_log_scaled, standard_normal_vector, McEstimate, ZAffineAction,
};

use crate::action::AffineZAction;
use crate::error::{DynError, Result};

/// Exponent guard: the closed form holds for all `beta`, but the sampled
/// lognormal needs both the mean and the variance of `omega^{-beta}` finite
/// and tame for a usable Monte-Carlo error bar.
pub const BETA_LIMIT: f64 = 2.0;

/// Cocycle-size guard `||scale * c_a|| <= 2` for the same reason.
pub const SIGMA_LIMIT: f64 = 2.0;

/// Both sides of the negative-moment identity
/// `E[omega(a, .)^{-beta}] = exp(beta (beta + 1) ||scale * c_a||^2 / 2)`.
#[derive(Clone, Copy, Debug)]
pub struct MomentCheck {
    pub analytic: f64,
    pub mc: McEstimate,
    /// `||scale * c_a||`, the lognormal parameter actually used.
    pub sigma: f64,
    pub beta: f64,
}

pub fn moment_identity_check(
    action: &AffineZAction,
    a: i64,
    beta: f64,
    samples: u64,
    seed: u64,
) -> Result<MomentCheck> {
    if !(beta.is_finite() && beta.abs() <= BETA_LIMIT) {
        return Err(DynError::InvalidParameter {
            name: "beta",
            reason: format!("must lie in [-{BETA_LIMIT}, {BETA_LIMIT}], got {beta}"),
        });
    }
    if samples == 0 {
        return Err(DynError::InvalidParameter {
            name: "samples",
            reason: "need at least one sample".into(),
        });
    }
    let sigma_sq = action.scale() * action.scale() * action.cocycle_norm_sq(a)?;
    let sigma = sigma_sq.sqrt();
    if sigma > SIGMA_LIMIT {
        return Err(DynError::VarianceGuard {
            what: "||scale * c_a||",
            value: sigma,
            limit: SIGMA_LIMIT,
        });
    }
    let analytic = (0.5 * beta * (beta + 1.0) * sigma_sq).exp();
    let scale = action.scale();
    let dim = action.dim();
    let acc = mc_over_substreams(seed, samples, |rng| {
        let x = standard_normal_vector(rng, dim);
        (-beta * rn_log_scaled(action, scale, a, &x)).exp()
    });
    Ok(MomentCheck {
        analytic,
        mc: acc.estimate(),
        sigma,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{Block, Turns};
    use num_complex::Complex64;

    fn unit_sigma_action() -> AffineZAction {
        // One rotation block, |gen| = 1, scale 1: sigma = |C_1| = 1.
        AffineZAction::new(
            vec![Block::Rotation {
                turns: Turns::Real(0.21),
                gen: Complex64::new(0.6, 0.8),
            }],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn beta_zero_is_exactly_one() {
        let action = unit_sigma_action();
        let check = moment_identity_check(&action, 5, 0.0, 4096, 9).unwrap();
        assert_eq!(check.analytic, 1.0);
        assert_eq!(check.mc.value, 1.0);
        assert_eq!(check.mc.std_error, 0.0);
    }

    #[test]
    fn beta_minus_one_has_unit_mean() {
        // Densities integrate to one: beta = -1 kills the exponent.
        let action = unit_sigma_action();
        let check = moment_identity_check(&action, 3, -1.0, 200_000, 10).unwrap();
        assert_eq!(check.analytic, 1.0);
        assert!(check.mc.sigmas_from(1.0) <= 3.0, "{:?}", check.mc);
    }

    #[test]
    fn unit_sigma_beta_one_gives_e() {
        let action = unit_sigma_action();
        assert!((action.cocycle_norm_sq(1).unwrap() - 1.0).abs() <= 1e-12);
        let check = moment_identity_check(&action, 1, 1.0, 400_000, 11).unwrap();
        assert!((check.analytic - std::f64::consts::E).abs() <= 1e-12);
        assert!(check.mc.sigmas_from(check.analytic) <= 3.0, "{:?}", check.mc);
        assert!(
            (check.mc.value - check.analytic).abs() <= 0.03 * check.analytic,
            "{:?}",
            check.mc
        );
    }

    #[test]
    fn guards_refuse_extreme_parameters() {
        let action = unit_sigma_action();
        assert!(matches!(
            moment_identity_check(&action, 1, 2.5, 100, 1).unwrap_err(),
            DynError::InvalidParameter { name: "beta", .. }
        ));
        // ||c_a|| grows like the geometric sum; a frequency near resonance
        // with a long run pushes sigma past the guard.
        let big = AffineZAction::new(
            vec![Block::Rotation {
                turns: Turns::Real(1e-4),
                gen: Complex64::new(1.0, 0.0),
            }],
            1.0,
        )
        .unwrap();
        assert!(matches!(
            moment_identity_check(&big, 1000, 1.0, 100, 1).unwrap_err(),
            DynError::VarianceGuard { .. }
        ));
    }
}
