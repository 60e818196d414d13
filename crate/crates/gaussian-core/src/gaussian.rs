use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{GaussError, Result};
use crate::rng::{mc_over_substreams, stream_rng, McEstimate};
use crate::vector::RealVector;

/// Draws `count` independent standard Gaussian points of `R^dim`.
pub fn sample_gaussian(dim: usize, count: usize, seed: u64) -> Result<Vec<RealVector>> {
    if dim == 0 {
        return Err(GaussError::EmptyInput { name: "dim" });
    }
    let mut rng = stream_rng(seed, 0);
    Ok((0..count)
        .map(|_| standard_normal_vector(&mut rng, dim))
        .collect())
}

/// One standard Gaussian point of `R^dim` from an existing generator.
pub fn standard_normal_vector<R: Rng>(rng: &mut R, dim: usize) -> RealVector {
    RealVector::new((0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
}

/// Log-density of the translated Gaussian measure against the standard one:
/// `log(d mu_eta / d mu)(x) = -||eta||^2/2 + <x, eta>`.
pub fn log_rn_translation(eta: &RealVector, x: &RealVector) -> Result<f64> {
    eta.check_dim(x)?;
    if !eta.is_finite() || !x.is_finite() {
        return Err(GaussError::NonFinite {
            what: "log_rn_translation input",
        });
    }
    Ok(-0.5 * eta.norm_sq() + x.dot(eta))
}

/// Comparison of the closed-form characteristic functional with a
/// Monte-Carlo average.
#[derive(Clone, Copy, Debug)]
pub struct CharacteristicCheck {
    /// `exp(-||xi + eta||^2 / 2)`.
    pub analytic: f64,
    /// Sample average of `cos <x, xi + eta>` (the imaginary part vanishes by
    /// symmetry).
    pub estimate: McEstimate,
}

/// Checks `E[exp(i <x, xi + eta>)] = exp(-||xi + eta||^2 / 2)` by sampling.
pub fn characteristic_check(
    xi: &RealVector,
    eta: &RealVector,
    samples: u64,
    seed: u64,
) -> Result<CharacteristicCheck> {
    xi.check_dim(eta)?;
    if samples == 0 {
        return Err(GaussError::EmptyInput { name: "samples" });
    }
    let direction = xi.add(eta);
    if !direction.is_finite() {
        return Err(GaussError::NonFinite {
            what: "characteristic_check direction",
        });
    }
    let dim = direction.dim();
    let analytic = (-0.5 * direction.norm_sq()).exp();
    let acc = mc_over_substreams(seed, samples, |rng| {
        let x = standard_normal_vector(rng, dim);
        x.dot(&direction).cos()
    });
    Ok(CharacteristicCheck {
        analytic,
        estimate: acc.estimate(),
    })
}
