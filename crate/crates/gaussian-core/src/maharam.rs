use rand::Rng;

use crate::error::{GaussError, Result};
use crate::gaussian::standard_normal_vector;
use crate::rng::{mc_over_substreams_vec, McEstimate};
use crate::vector::RealVector;

/// A point `(x, t)` of the Maharam extension `R^d x R`, carrying the
/// measure `d mu(x) e^{-t} dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaharamPoint {
    pub x: RealVector,
    pub t: f64,
}

/// The Maharam lift of translation by `xi`:
/// `(x, t) -> (x + xi, t - ||xi||^2/2 - <x, xi>)`, which preserves
/// `d mu(x) e^{-t} dt`.
pub fn maharam_translate(xi: &RealVector, p: &MaharamPoint) -> Result<MaharamPoint> {
    xi.check_dim(&p.x)?;
    if !xi.is_finite() || !p.x.is_finite() || !p.t.is_finite() {
        return Err(GaussError::NonFinite {
            what: "maharam_translate input",
        });
    }
    let shift = -0.5 * xi.norm_sq() - p.x.dot(xi);
    Ok(MaharamPoint {
        x: p.x.add(xi),
        t: p.t + shift,
    })
}

/// Two importance-sampled integrals of the same bounded test function, one
/// through the Maharam translation and one directly; they agree when the
/// lift preserves `d mu(x) e^{-t} dt`.
#[derive(Clone, Copy, Debug)]
pub struct InvarianceCheck {
    pub translated: McEstimate,
    pub reference: McEstimate,
}

impl InvarianceCheck {
    /// Discrepancy in combined standard errors.
    pub fn sigmas(&self) -> f64 {
        let se = (self.translated.std_error.powi(2) + self.reference.std_error.powi(2)).sqrt();
        let diff = (self.translated.value - self.reference.value).abs();
        if diff == 0.0 {
            0.0
        } else if se == 0.0 {
            f64::INFINITY
        } else {
            diff / se
        }
    }
}

/// Half-width of the uniform proposal for the `t` coordinate. The test
/// function is supported in `|t| <= 2.5` and the translation shifts `t` by
/// `-||xi||^2/2 - <x, xi>`, sub-Gaussian for `||xi|| <= 1`, so mass outside
/// the window is negligible against Monte-Carlo error.
const T_WINDOW: f64 = 12.0;

fn test_function(x: &RealVector, t: f64) -> f64 {
    // cos(x_1) times a tent in t supported on [-1.5, 2.5].
    let tent = (1.0 - (t - 0.5).abs() / 2.0).max(0.0);
    x[0].cos() * tent
}

/// Monte-Carlo check that `maharam_translate` preserves
/// `d mu(x) e^{-t} dt`: both estimates integrate against that infinite
/// measure via importance sampling from `mu x Uniform(-12, 12)`, the first
/// one integrating `f` composed with the translation, the second `f`
/// itself. Equality of the two integrals is the invariance statement.
pub fn maharam_invariance_mc(xi: &RealVector, samples: u64, seed: u64) -> Result<InvarianceCheck> {
    if xi.dim() == 0 {
        return Err(GaussError::EmptyInput { name: "xi" });
    }
    if samples == 0 {
        return Err(GaussError::EmptyInput { name: "samples" });
    }
    if xi.norm() > 1.0 {
        return Err(GaussError::InvalidParameter {
            name: "xi",
            reason: format!("variance guard: ||xi|| = {} exceeds 1", xi.norm()),
        });
    }
    let dim = xi.dim();
    let accs = mc_over_substreams_vec(seed, samples, 2, |rng, out| {
        let x = standard_normal_vector(rng, dim);
        let t = rng.random_range(-T_WINDOW..T_WINDOW);
        // Importance weight for e^{-t} dt against the uniform proposal.
        let w = 2.0 * T_WINDOW * (-t).exp();
        let p = maharam_translate(xi, &MaharamPoint { x: x.clone(), t })
            .expect("dimensions checked above");
        out[0] = test_function(&p.x, p.t) * w;
        out[1] = test_function(&x, t) * w;
    });
    Ok(InvarianceCheck {
        translated: accs[0].estimate(),
        reference: accs[1].estimate(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translate_composes_as_group() {
        // J_xi J_eta = J_{xi + eta} exactly up to rounding.
        let xi = RealVector::new(vec![0.3, -0.2]);
        let eta = RealVector::new(vec![-0.1, 0.5]);
        let p = MaharamPoint {
            x: RealVector::new(vec![1.1, 0.7]),
            t: -0.4,
        };
        let one = maharam_translate(&xi, &maharam_translate(&eta, &p).unwrap()).unwrap();
        let both = maharam_translate(&xi.add(&eta), &p).unwrap();
        assert!((one.t - both.t).abs() < 1e-12);
        assert!(one.x.sub(&both.x).norm() < 1e-12);
    }

    #[test]
    fn invariance_holds_within_error() {
        let xi = RealVector::new(vec![0.5, -0.3, 0.4]);
        let check = maharam_invariance_mc(&xi, 400_000, 17).unwrap();
        assert!(check.sigmas() < 4.0, "{check:?}");
        // The reference side really sees the test function.
        assert!(check.reference.value.abs() > 0.05);
    }

    #[test]
    fn variance_guard_rejects_long_xi() {
        let xi = RealVector::new(vec![2.0, 0.0]);
        assert!(maharam_invariance_mc(&xi, 10, 0).is_err());
    }
}
