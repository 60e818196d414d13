use gaussian_core::{
    mc_over_substreams_vec, rn_log_scaled, standard_normal_vector, McEstimate, ZAffineAction,
};
use rand::Rng;
use rand_distr::Exp1;

use crate::action::AffineZAction;
use crate::error::{DynError, Result};
use crate::moment::SIGMA_LIMIT;

/// Monte-Carlo and analytic sides of the density-fraction bound
///
/// ```text
/// E[ Sigma_B omega / Sigma_A omega ] <= sqrt( |B| / |A|^2 * Sigma_{g in A} E[omega(g)^{-1}] ),
/// ```
///
/// together with the same bound for the Maharam extension weighted by the
/// height measure `(rho/2) e^{-rho |t|} dt`, where `E[omega-tilde(g)^{-1}]`
/// is replaced by the two-moment majorant
/// `E[omega^{-(1-rho)}] + E[omega^{-(1+rho)}]`.
#[derive(Clone, Debug)]
pub struct FractionBound {
    pub lhs: McEstimate,
    pub rhs: f64,
    pub maharam_lhs: McEstimate,
    pub maharam_rhs: f64,
    pub rho: f64,
    /// `(|A|, |B|)` as given.
    pub sizes: (usize, usize),
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + values.iter().map(|&v| (v - max).exp()).sum::<f64>().ln()
}

/// Samples the fraction `Sigma_{g in B} omega(g, x) / Sigma_{g in A} omega(g, x)`
/// over the Gaussian measure and compares it against the moment-identity
/// bound; `B` must be contained in `A`, so the ratio lies in `[0, 1]` and
/// needs no variance guard of its own. The Maharam variant replaces
/// `omega` by `omega-tilde(g, (x, t)) = omega * e^{-rho (|t + log omega| - |t|)}`
/// with `t` Laplace-distributed of rate `rho`.
pub fn fraction_bound_check(
    action: &AffineZAction,
    a_set: &[i64],
    b_set: &[i64],
    rho: f64,
    samples: u64,
    seed: u64,
) -> Result<FractionBound> {
    if a_set.is_empty() {
        return Err(DynError::InvalidParameter {
            name: "a_set",
            reason: "must be nonempty".into(),
        });
    }
    if !(rho.is_finite() && 0.0 < rho && rho < 1.0) {
        return Err(DynError::InvalidParameter {
            name: "rho",
            reason: format!("must lie in (0, 1), got {rho}"),
        });
    }
    if samples == 0 {
        return Err(DynError::InvalidParameter {
            name: "samples",
            reason: "need at least one sample".into(),
        });
    }
    for &b in b_set {
        if !a_set.contains(&b) {
            return Err(DynError::NotSubset { element: b });
        }
    }
    let scale = action.scale();
    // Analytic right-hand sides from E[omega^{-beta}] = e^{beta(beta+1) sigma^2/2}.
    let mut sum_plain = 0.0f64;
    let mut sum_maharam = 0.0f64;
    let mut max_sigma = 0.0f64;
    for &g in a_set {
        let sigma_sq = scale * scale * action.cocycle_norm_sq(g)?;
        max_sigma = max_sigma.max(sigma_sq.sqrt());
        sum_plain += sigma_sq.exp();
        sum_maharam += (0.5 * (1.0 - rho) * (2.0 - rho) * sigma_sq).exp()
            + (0.5 * (1.0 + rho) * (2.0 + rho) * sigma_sq).exp();
    }
    if max_sigma > SIGMA_LIMIT {
        return Err(DynError::VarianceGuard {
            what: "max ||scale * c_g||",
            value: max_sigma,
            limit: SIGMA_LIMIT,
        });
    }
    let card = |set: &[i64]| set.len() as f64;
    let rhs = (card(b_set) / (card(a_set) * card(a_set)) * sum_plain).sqrt();
    let maharam_rhs = (card(b_set) / (card(a_set) * card(a_set)) * sum_maharam).sqrt();
    let dim = action.dim();
    let accs = mc_over_substreams_vec(seed, samples, 2, |rng, out| {
        let x = standard_normal_vector(rng, dim);
        let e: f64 = rng.sample(Exp1);
        let t = if rng.random::<bool>() { e / rho } else { -e / rho };
        let plain = |g: i64| rn_log_scaled(action, scale, g, &x);
        let tilted = |g: i64| {
            let lw = plain(g);
            lw - rho * ((t + lw).abs() - t.abs())
        };
        let la: Vec<f64> = a_set.iter().map(|&g| plain(g)).collect();
        let lb: Vec<f64> = b_set.iter().map(|&g| plain(g)).collect();
        out[0] = (log_sum_exp(&lb) - log_sum_exp(&la)).exp();
        let lam: Vec<f64> = a_set.iter().map(|&g| tilted(g)).collect();
        let lbm: Vec<f64> = b_set.iter().map(|&g| tilted(g)).collect();
        out[1] = (log_sum_exp(&lbm) - log_sum_exp(&lam)).exp();
    });
    Ok(FractionBound {
        lhs: accs[0].estimate(),
        rhs,
        maharam_lhs: accs[1].estimate(),
        maharam_rhs,
        rho,
        sizes: (a_set.len(), b_set.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{Block, Turns};
    use num_complex::Complex64;

    fn test_action() -> AffineZAction {
        AffineZAction::new(
            vec![
                Block::Rotation {
                    turns: Turns::Real(0.317),
                    gen: Complex64::new(0.3, 0.1),
                },
                Block::Rotation {
                    turns: Turns::Ternary { numer: 2, level: 2 },
                    gen: Complex64::new(-0.2, 0.25),
                },
                Block::Trivial { gen: 0.05 },
            ],
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn equal_sets_give_exactly_one() {
        let action = test_action();
        let a: Vec<i64> = (-4..=4).collect();
        let out = fraction_bound_check(&action, &a, &a, 0.4, 2048, 5).unwrap();
        assert_eq!(out.lhs.value, 1.0);
        assert_eq!(out.lhs.std_error, 0.0);
        assert_eq!(out.maharam_lhs.value, 1.0);
        assert!(out.rhs >= 1.0);
        assert!(out.maharam_rhs >= 1.0);
    }

    #[test]
    fn empty_subset_gives_zero() {
        let action = test_action();
        let a: Vec<i64> = (-4..=4).collect();
        let out = fraction_bound_check(&action, &a, &[], 0.4, 2048, 5).unwrap();
        assert_eq!(out.lhs.value, 0.0);
        assert_eq!(out.maharam_lhs.value, 0.0);
    }

    #[test]
    fn non_subset_is_rejected() {
        let action = test_action();
        let err = fraction_bound_check(&action, &[0, 1, 2], &[5], 0.4, 64, 5).unwrap_err();
        assert!(matches!(err, DynError::NotSubset { element: 5 }));
    }

    #[test]
    fn bound_holds_with_slack_on_random_sets() {
        let action = test_action();
        let a: Vec<i64> = (-32..32).collect();
        let b = [-7i64, 0, 11, 23];
        let out = fraction_bound_check(&action, &a, &b, 0.4, 50_000, 12).unwrap();
        assert!(
            out.lhs.value <= out.rhs + 3.0 * out.lhs.std_error,
            "{out:?}"
        );
        assert!(
            out.maharam_lhs.value <= out.maharam_rhs + 3.0 * out.maharam_lhs.std_error,
            "{out:?}"
        );
        // The lhs is a genuine fraction.
        assert!(out.lhs.value > 0.0 && out.lhs.value < 1.0);
    }
}
