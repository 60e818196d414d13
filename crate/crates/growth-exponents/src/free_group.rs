use std::fmt;

use num_bigint::BigUint;

use crate::error::{GrowthError, Result};
use crate::profile::{GrowthProfile, ProfileKind};

/// Free group `F_n` with the uniform step law on its `2n` generators.
///
/// The word metric embeds into Hilbert space with `|c_g|^2 = |g|`, so every
/// exponent attached to the associated affine action is a function of the
/// radial counts alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroupModel {
    n_gens: u32,
}

impl FreeGroupModel {
    pub fn new(n_gens: u32) -> Result<Self> {
        if n_gens < 2 {
            return Err(GrowthError::InvalidParameter {
                name: "n_gens",
                reason: format!("free-group rank must be >= 2, got {n_gens}"),
            });
        }
        Ok(Self { n_gens })
    }

    pub fn n_gens(&self) -> u32 {
        self.n_gens
    }

    /// Number of reduced words of length exactly `r`: `2n (2n-1)^{r-1}`.
    pub fn sphere_size(&self, r: u32) -> BigUint {
        if r == 0 {
            return BigUint::from(1u32);
        }
        let branch = BigUint::from(2 * self.n_gens - 1);
        BigUint::from(2 * self.n_gens) * branch.pow(r - 1)
    }

    /// Number of reduced words of length at most `r`, exactly.
    pub fn ball_size(&self, r: u32) -> BigUint {
        let mut total = BigUint::from(1u32);
        for k in 1..=r {
            total += self.sphere_size(k);
        }
        total
    }

    /// Ball size as a float via the geometric closed form
    /// `1 + 2n ((2n-1)^r - 1) / (2n - 2)`; exact while below `2^53`.
    pub fn ball_size_f64(&self, r: u32) -> f64 {
        let n2 = f64::from(2 * self.n_gens);
        let branch = n2 - 1.0;
        1.0 + n2 * (branch.powi(r as i32) - 1.0) / (n2 - 2.0)
    }

    /// Growth profile of the tree cocycle `|c_g|^2 = |g|` up to `radius`.
    pub fn tree_profile(&self, radius: u32) -> GrowthProfile {
        let points: Vec<(f64, f64)> = (0..=radius)
            .map(|r| (f64::from(r), self.ball_size_f64(r)))
            .collect();
        GrowthProfile::from_points(ProfileKind::NormSquared, points)
            .expect("ball sizes are strictly increasing from 1")
    }

    /// Poincare exponent of the tree profile, `log(2n - 1)`.
    pub fn poincare_delta(&self) -> f64 {
        f64::from(2 * self.n_gens - 1).ln()
    }

    /// Limit of `H(mu^{*k}) / k`: `(1 - 1/n) log(2n - 1)`.
    pub fn entropy_limit(&self) -> f64 {
        (1.0 - 1.0 / f64::from(self.n_gens)) * self.poincare_delta()
    }

    /// Limit of `E|X_k| / k`: `1 - 1/n`.
    pub fn drift_limit(&self) -> f64 {
        1.0 - 1.0 / f64::from(self.n_gens)
    }
}

/// Dissipativity thresholds in the scale parameter `t` derived from a
/// Poincare exponent `delta`.
#[derive(Debug, Clone, Copy)]
pub struct TdissWindow {
    /// Lower bound `sqrt(2 delta)`: below it the action is conservative.
    pub lo: f64,
    /// Upper bound `2 sqrt(2 delta)`: above it the action is dissipative.
    pub hi: f64,
    /// For tree actions the upper bound is attained: `t_diss = 2 sqrt(2 delta)`.
    pub tree_exact: Option<f64>,
    /// Free-group strong-ergodicity bound `2 sqrt(delta)`.
    pub strong_ergodicity_bound: Option<f64>,
    /// Stable type III_1 holds for `t < sqrt(delta)` over proper spaces.
    pub stable_type_bound: f64,
}

/// Evaluates the dissipativity window `[sqrt(2 delta), 2 sqrt(2 delta)]`.
///
/// With `tree_action` set, the window collapses: the upper bound is the exact
/// threshold, and the free-group strong-ergodicity bound `2 sqrt(delta)` is
/// also reported.
pub fn tdiss_window(delta: f64, tree_action: bool) -> Result<TdissWindow> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(GrowthError::InvalidParameter {
            name: "delta",
            reason: format!("Poincare exponent must be finite and >= 0, got {delta}"),
        });
    }
    let lo = (2.0 * delta).sqrt();
    let hi = 2.0 * lo;
    Ok(TdissWindow {
        lo,
        hi,
        tree_exact: tree_action.then_some(hi),
        strong_ergodicity_bound: tree_action.then_some(2.0 * delta.sqrt()),
        stable_type_bound: delta.sqrt(),
    })
}

/// Convergence verdict for the Koopman matrix-coefficient series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVerdict {
    Converges,
    Diverges,
}

impl fmt::Display for SeriesVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesVerdict::Converges => write!(f, "converges"),
            SeriesVerdict::Diverges => write!(f, "diverges"),
        }
    }
}

/// Partial sums and shell diagnosis of `sum_g exp(-t^2 |c_g|^2 / 4)`.
#[derive(Debug, Clone)]
pub struct KoopmanReport {
    pub t: f64,
    /// `(radius, partial sum over the ball of that radius)`.
    pub partial_sums: Vec<(u32, f64)>,
    /// Per-shell growth factor `(2n - 1) exp(-t^2 / 4)`; the series is
    /// geometric in the radius from `r = 1` on, so comparing this ratio to 1
    /// is an exact convergence test, not a heuristic.
    pub shell_ratio: f64,
    pub verdict: SeriesVerdict,
    /// Closed-form value `1 + 2n x / (1 - (2n-1) x)` with `x = exp(-t^2/4)`,
    /// present exactly when the series converges.
    pub limit: Option<f64>,
}

/// Evaluates the square-summability test deciding when the Koopman
/// representation of the scaled tree action embeds in the regular one.
pub fn koopman_l2_report(model: &FreeGroupModel, t: f64, cutoff_radius: u32) -> Result<KoopmanReport> {
    if !t.is_finite() || t < 0.0 {
        return Err(GrowthError::InvalidParameter {
            name: "t",
            reason: format!("scale must be finite and >= 0, got {t}"),
        });
    }
    let n2 = f64::from(2 * model.n_gens());
    let x = (-t * t / 4.0).exp();
    let shell_ratio = (n2 - 1.0) * x;
    let mut partial_sums = Vec::with_capacity(cutoff_radius as usize + 1);
    let mut sum = 1.0_f64;
    partial_sums.push((0, sum));
    // term(r) = 2n (2n-1)^{r-1} x^r, updated multiplicatively.
    let mut term = n2 * x;
    for r in 1..=cutoff_radius {
        sum += term;
        partial_sums.push((r, sum));
        term *= shell_ratio;
    }
    let verdict = if shell_ratio < 1.0 {
        SeriesVerdict::Converges
    } else {
        SeriesVerdict::Diverges
    };
    let limit = (shell_ratio < 1.0).then(|| 1.0 + n2 * x / (1.0 - shell_ratio));
    Ok(KoopmanReport {
        t,
        partial_sums,
        shell_ratio,
        verdict,
        limit,
    })
}

/// Partial sums of `sum exp(-t^2 s / 4)` weighted by the count increments of
/// an arbitrary norm-squared profile; one running value per profile cutoff.
pub fn koopman_partial_sums(profile: &GrowthProfile, t: f64) -> Result<Vec<(f64, f64)>> {
    if profile.kind() != ProfileKind::NormSquared {
        return Err(GrowthError::KindMismatch {
            expected: ProfileKind::NormSquared,
            got: profile.kind(),
        });
    }
    if !t.is_finite() || t < 0.0 {
        return Err(GrowthError::InvalidParameter {
            name: "t",
            reason: format!("scale must be finite and >= 0, got {t}"),
        });
    }
    let points = profile.points();
    let mut out = Vec::with_capacity(points.len());
    let mut sum = points[0].1; // mass at s = 0 contributes weight 1 each
    out.push((0.0, sum));
    for w in points.windows(2) {
        let (s, c1) = w[1];
        let mass = c1 - w[0].1;
        sum += mass * (-t * t * s / 4.0).exp();
        out.push((s, sum));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::poincare_exponent;

    #[test]
    fn rank_guard_rejects_cyclic_groups() {
        assert!(FreeGroupModel::new(0).is_err());
        assert!(FreeGroupModel::new(1).is_err());
        assert_eq!(FreeGroupModel::new(2).unwrap().n_gens(), 2);
    }

    #[test]
    fn ball_sizes_follow_the_sphere_recursion_exactly() {
        let f2 = FreeGroupModel::new(2).unwrap();
        assert_eq!(f2.ball_size(0), BigUint::from(1u32));
        assert_eq!(f2.ball_size(1), BigUint::from(5u32));
        assert_eq!(f2.ball_size(3), BigUint::from(53u32));
        for n in [2u32, 3, 5] {
            let model = FreeGroupModel::new(n).unwrap();
            for r in 0..100 {
                let step = model.ball_size(r + 1) - model.ball_size(r);
                let shell =
                    BigUint::from(2 * n) * BigUint::from(2 * n - 1).pow(r);
                assert_eq!(step, shell, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn float_ball_sizes_match_exact_ones_in_range() {
        for n in [2u32, 3, 4] {
            let model = FreeGroupModel::new(n).unwrap();
            for r in 0..=20 {
                let exact = u128::try_from(model.ball_size(r)).expect("fits u128");
                if exact >= 1u128 << 53 {
                    break;
                }
                assert_eq!(model.ball_size_f64(r), exact as f64, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn tree_profile_estimates_log_branching() {
        let f2 = FreeGroupModel::new(2).unwrap();
        let report = poincare_exponent(&f2.tree_profile(12)).unwrap();
        assert!((report.estimate - 3.0_f64.ln()).abs() < 1e-9);
        assert!((report.estimate - f2.poincare_delta()).abs() < 1e-9);
        let f3 = FreeGroupModel::new(3).unwrap();
        let report = poincare_exponent(&f3.tree_profile(12)).unwrap();
        assert!((report.estimate - 5.0_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn tdiss_window_matches_closed_forms() {
        let zero = tdiss_window(0.0, false).unwrap();
        assert_eq!((zero.lo, zero.hi), (0.0, 0.0));
        let half = tdiss_window(0.5, false).unwrap();
        assert_eq!((half.lo, half.hi), (1.0, 2.0));
        assert!(half.tree_exact.is_none());

        let f2 = tdiss_window(3.0_f64.ln(), true).unwrap();
        assert!((f2.lo - 1.4823).abs() <= 1e-4);
        assert!((f2.hi - 2.9646).abs() <= 1e-4);
        assert_eq!(f2.tree_exact, Some(f2.hi));
        assert!((f2.strong_ergodicity_bound.unwrap() - 2.0 * 3.0_f64.ln().sqrt()).abs() < 1e-12);
        assert!((f2.stable_type_bound - 3.0_f64.ln().sqrt()).abs() < 1e-12);

        assert!(tdiss_window(-0.1, false).is_err());
        assert!(tdiss_window(f64::NAN, false).is_err());
    }

    #[test]
    fn koopman_diagnosis_flips_between_two_and_two_point_two() {
        let f2 = FreeGroupModel::new(2).unwrap();
        let diverging = koopman_l2_report(&f2, 2.0, 40).unwrap();
        assert_eq!(diverging.verdict, SeriesVerdict::Diverges);
        assert!(diverging.shell_ratio > 1.0);
        assert!(diverging.limit.is_none());

        let converging = koopman_l2_report(&f2, 2.2, 100).unwrap();
        assert_eq!(converging.verdict, SeriesVerdict::Converges);
        assert!(converging.shell_ratio < 1.0);
        let limit = converging.limit.unwrap();
        assert!((limit - 12.315908544134738).abs() < 1e-9 * limit);
        // Partial sums increase toward the limit; geometric tail bound.
        let last = converging.partial_sums.last().unwrap().1;
        assert!(last < limit && limit - last < 1e-3);

        let counting = koopman_l2_report(&f2, 0.0, 10).unwrap();
        assert_eq!(counting.verdict, SeriesVerdict::Diverges);
        assert_eq!(counting.shell_ratio, 3.0);
    }

    #[test]
    fn profile_koopman_sums_match_the_tree_closed_form() {
        let f2 = FreeGroupModel::new(2).unwrap();
        let report = koopman_l2_report(&f2, 2.2, 15).unwrap();
        let from_profile = koopman_partial_sums(&f2.tree_profile(15), 2.2).unwrap();
        assert_eq!(report.partial_sums.len(), from_profile.len());
        for (&(r, direct), &(s, via_profile)) in
            report.partial_sums.iter().zip(from_profile.iter())
        {
            assert_eq!(f64::from(r), s);
            assert!((direct - via_profile).abs() <= 1e-12 * direct.max(1.0));
        }
    }
}
