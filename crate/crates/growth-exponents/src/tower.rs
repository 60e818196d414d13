use crate::error::{GrowthError, Result};
use crate::profile::{GrowthProfile, ProfileKind};

/// Deepest supported tower. Within this depth every mass power
/// `lambda(K_{n+1})^{n+1}` of a moderately growing tower fits in `f64`;
/// inputs that overflow anyway are refused rather than approximated.
pub const MAX_TOWER_LEVELS: usize = 12;

/// Sizes `|K_n| = 2^n` of the canonical tower of elementary abelian
/// 2-groups, `levels + 1` entries.
pub fn doubling_tower_sizes(levels: usize) -> Vec<f64> {
    (0..=levels).map(|n| f64::powi(2.0, n as i32)).collect()
}

/// Cocycle data of a locally finite group built as an increasing union of
/// finite subgroups `K_0 <= K_1 <= ...`.
#[derive(Debug, Clone)]
pub struct TowerReport {
    /// Haar masses of the tower levels, as given.
    pub sizes: Vec<f64>,
    /// Coefficients chosen by the growth recursion, `alpha_0 = 1` and
    /// `alpha_n = lambda(K_{n+1})^{n+1} + sum_{k<n} alpha_k sqrt(2 lambda(K_k))`.
    pub alphas: Vec<f64>,
    /// `|c(g)|` for representatives `g` in `K_{n+1} \ K_n`; the value is
    /// constant on each such shell.
    pub shell_norms: Vec<f64>,
    /// `lambda(K_{n+1})^{n+1}`, the guaranteed lower bound on `|c(g)|` for
    /// `n >= 1` (the base coefficient is a free normalization, so the bound
    /// is not claimed on the very first shell).
    pub lower_bounds: Vec<f64>,
    /// Mass-vs-norm growth profile feeding the skew-product exponent.
    pub profile: GrowthProfile,
}

/// Builds the dissipative cocycle `c(g) = sum_n alpha_n (1_{g K_n} - 1_{K_n})`
/// on the union of the given tower and evaluates its growth profile.
///
/// For `g` in `K_{n+1} \ K_n` only the terms `k <= n` survive, and the single
/// difference has `|1_{g K_k} - 1_{K_k}|^2 = 2 lambda(K_k)`. The terms are
/// not orthogonal: the cosets are nested, so the sum is evaluated exactly on
/// the shell decomposition, where `c(g)` equals `+-(alpha_j + ... + alpha_n)`
/// on the shells `g K_j \ g K_{j-1}` and `K_j \ K_{j-1}`:
///
/// ```text
/// |c(g)|^2 = sum_{j=0}^{n} 2 (lambda(K_j) - lambda(K_{j-1})) (sum_{k=j}^{n} alpha_k)^2.
/// ```
pub fn locally_finite_cocycle(sizes: &[f64]) -> Result<TowerReport> {
    if sizes.len() < 2 {
        return Err(GrowthError::InvalidParameter {
            name: "sizes",
            reason: format!("need at least two tower levels, got {}", sizes.len()),
        });
    }
    let levels = sizes.len() - 1;
    if levels > MAX_TOWER_LEVELS {
        return Err(GrowthError::InvalidParameter {
            name: "sizes",
            reason: format!("{levels} levels exceed the supported {MAX_TOWER_LEVELS}"),
        });
    }
    for &s in sizes {
        if !s.is_finite() {
            return Err(GrowthError::InvalidParameter {
                name: "sizes",
                reason: format!("non-finite mass {s}"),
            });
        }
    }
    if sizes[0] < 1.0 {
        return Err(GrowthError::InvalidParameter {
            name: "sizes",
            reason: format!("K_0 must carry mass >= 1, got {}", sizes[0]),
        });
    }
    for w in sizes.windows(2) {
        if w[1] < w[0] {
            return Err(GrowthError::InvalidParameter {
                name: "sizes",
                reason: format!("masses decrease at {}", w[1]),
            });
        }
    }

    let mut lower_bounds = Vec::with_capacity(levels);
    for n in 0..levels {
        let bound = sizes[n + 1].powi(n as i32 + 1);
        if !bound.is_finite() {
            return Err(GrowthError::TowerOverflow {
                level: n,
                power: n + 1,
            });
        }
        lower_bounds.push(bound);
    }

    let mut alphas = vec![1.0_f64];
    for (n, bound) in lower_bounds.iter().enumerate().skip(1) {
        // Cross terms run over the levels already fixed, k = 0..n.
        let cross: f64 = alphas
            .iter()
            .zip(sizes)
            .map(|(a, s)| a * (2.0 * s).sqrt())
            .sum();
        let alpha = bound + cross;
        if !alpha.is_finite() {
            return Err(GrowthError::TowerOverflow {
                level: n,
                power: n + 1,
            });
        }
        alphas.push(alpha);
    }

    let mut shell_norms = Vec::with_capacity(levels);
    for n in 0..levels {
        let mut norm_sq = 0.0_f64;
        for j in 0..=n {
            let shell = sizes[j] - if j >= 1 { sizes[j - 1] } else { 0.0 };
            let tail: f64 = alphas[j..=n].iter().sum();
            norm_sq += 2.0 * shell * tail * tail;
        }
        if !norm_sq.is_finite() {
            return Err(GrowthError::TowerOverflow {
                level: n,
                power: n + 1,
            });
        }
        shell_norms.push(norm_sq.sqrt());
    }
    for (n, (norm, bound)) in shell_norms.iter().zip(&lower_bounds).enumerate().skip(1) {
        assert!(
            norm >= bound,
            "shell norm {norm} fell below its bound {bound} at level {n}",
        );
    }

    let mut points = Vec::with_capacity(levels + 1);
    points.push((0.0, sizes[0]));
    for n in 0..levels {
        points.push((shell_norms[n], sizes[n + 1]));
    }
    let profile = GrowthProfile::from_points(ProfileKind::Norm, points)?;
    Ok(TowerReport {
        sizes: sizes.to_vec(),
        alphas,
        shell_norms,
        lower_bounds,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{skew_delta, DeltaVerdict};

    #[test]
    fn doubling_tower_matches_frozen_coefficients() {
        let report = locally_finite_cocycle(&doubling_tower_sizes(12)).unwrap();
        assert_eq!(report.alphas.len(), 12);
        let a3 = report.alphas[3];
        let a8 = report.alphas[8];
        assert!((a3 - 67122.90699654905).abs() <= 1e-12 * a3);
        assert!((a8 - 2.418146895523759e24).abs() <= 1e-12 * a8);
        for w in report.alphas.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn shell_norms_match_frozen_values_and_respect_the_bound() {
        let report = locally_finite_cocycle(&doubling_tower_sizes(12)).unwrap();
        let v3_sq = report.shell_norms[3] * report.shell_norms[3];
        assert!((v3_sq - 72688652583.22974).abs() <= 1e-12 * v3_sq);
        assert_eq!(report.lower_bounds[3], 65536.0);
        assert!(report.shell_norms[3] >= 65536.0);
        for n in 1..report.shell_norms.len() {
            assert!(report.shell_norms[n] >= report.lower_bounds[n]);
        }
    }

    #[test]
    fn identity_carries_zero_norm_and_the_base_mass() {
        let report = locally_finite_cocycle(&doubling_tower_sizes(8)).unwrap();
        assert_eq!(report.profile.points()[0], (0.0, 1.0));
    }

    #[test]
    fn first_shell_sits_below_the_unclaimed_bound() {
        // alpha_0 = 1 forces |c(g)| = sqrt(2 lambda(K_0)) on the first
        // shell, which is below lambda(K_1)^1 = 2; the bound starts at n = 1.
        let report = locally_finite_cocycle(&doubling_tower_sizes(8)).unwrap();
        assert_eq!(report.shell_norms[0], std::f64::consts::SQRT_2);
        assert!(report.shell_norms[0] < report.lower_bounds[0]);
    }

    #[test]
    fn coefficients_do_not_depend_on_later_levels() {
        let deep = locally_finite_cocycle(&doubling_tower_sizes(12)).unwrap();
        let shallow = locally_finite_cocycle(&doubling_tower_sizes(8)).unwrap();
        assert_eq!(&deep.alphas[..8], &shallow.alphas[..]);
        assert_eq!(&deep.shell_norms[..8], &shallow.shell_norms[..]);
    }

    #[test]
    fn eight_level_tower_is_dissipative() {
        let report = locally_finite_cocycle(&doubling_tower_sizes(8)).unwrap();
        let delta = skew_delta(&report.profile).unwrap();
        assert!((delta.estimate - 0.06886526085312047).abs() <= 1e-9);
        assert!(delta.estimate < 0.2);
        assert_eq!(delta.verdict, DeltaVerdict::Dissipative);
    }

    #[test]
    fn guards_refuse_bad_towers() {
        assert!(locally_finite_cocycle(&[1.0]).is_err());
        assert!(locally_finite_cocycle(&doubling_tower_sizes(13)).is_err());
        assert!(locally_finite_cocycle(&[0.5, 2.0]).is_err());
        assert!(locally_finite_cocycle(&[4.0, 2.0]).is_err());
        assert!(matches!(
            locally_finite_cocycle(&[1e300, 1e300, 1e300]).unwrap_err(),
            GrowthError::TowerOverflow { level: 1, power: 2 }
        ));
    }
}
