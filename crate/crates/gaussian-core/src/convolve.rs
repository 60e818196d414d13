use crate::error::{GaussError, Result};

/// A real function sampled on a uniform grid `start + i * step`.
#[derive(Clone, Debug, PartialEq)]
pub struct GriddedFunction {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl GriddedFunction {
    pub fn new(start: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) || !start.is_finite() {
            return Err(GaussError::InvalidParameter {
                name: "grid",
                reason: format!("start {start}, step {step}"),
            });
        }
        if values.is_empty() {
            return Err(GaussError::EmptyInput { name: "values" });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GaussError::NonFinite { what: "grid values" });
        }
        Ok(GriddedFunction { start, step, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    /// Grid-point quadrature of `sum values * step`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.step
    }

    /// Mean of the density described by the values (for moment checks).
    pub fn density_mean(&self) -> f64 {
        let mass: f64 = self.values.iter().sum();
        let first: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| self.point(i) * v)
            .sum();
        first / mass
    }
}

/// Kernel support is truncated at six standard deviations; the neglected
/// mass is below 2e-9, far under the quadrature tolerance.
const KERNEL_RADIUS_SIGMAS: f64 = 6.0;

/// Heat-type smoothing along the fiber: convolves `f` with the Gaussian
/// kernel `N(r^2/2, r^2)`, i.e.
/// `(Phi_r f)(t) = Integral f(t - s) N(s; r^2/2, r^2) ds`,
/// so a density's mean moves by `+r^2/2` and its variance grows by `r^2`.
///
/// The output grid is the sub-window of the input where the full truncated
/// kernel fits, so no boundary extrapolation is ever performed. The kernel
/// weights are normalized to unit mass, making constants exactly invariant.
pub fn gauss_convolve(f: &GriddedFunction, r: f64) -> Result<GriddedFunction> {
    if !(r.is_finite() && r > 0.0) {
        return Err(GaussError::InvalidParameter {
            name: "r",
            reason: format!("kernel width must be positive, got {r}"),
        });
    }
    let max_step = r / 8.0;
    if f.step > max_step {
        return Err(GaussError::GridTooCoarse {
            r,
            step: f.step,
            max_step,
        });
    }
    let mean = 0.5 * r * r;
    let lo = mean - KERNEL_RADIUS_SIGMAS * r;
    let hi = mean + KERNEL_RADIUS_SIGMAS * r;
    let k_lo = (lo / f.step).floor() as i64;
    let k_hi = (hi / f.step).ceil() as i64;
    let mut kernel: Vec<f64> = (k_lo..=k_hi)
        .map(|k| {
            let s = k as f64 * f.step;
            let z = (s - mean) / r;
            (-0.5 * z * z).exp()
        })
        .collect();
    let total: f64 = kernel.iter().sum();
    for w in kernel.iter_mut() {
        *w /= total;
    }

    // Output index i reads f at i - k for k in [k_lo, k_hi].
    let first = k_hi.max(0) as usize;
    let last_excl = f.len() as i64 + k_lo.min(0);
    if (first as i64) >= last_excl {
        return Err(GaussError::GridTooShort);
    }
    let values: Vec<f64> = (first..last_excl as usize)
        .map(|i| {
            kernel
                .iter()
                .enumerate()
                .map(|(j, w)| w * f.values[(i as i64 - (k_lo + j as i64)) as usize])
                .sum()
        })
        .collect();
    GriddedFunction::new(f.start + first as f64 * f.step, f.step, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_bump(start: f64, step: f64, n: usize, mean: f64, sd: f64) -> GriddedFunction {
        let values = (0..n)
            .map(|i| {
                let t = start + i as f64 * step;
                let z = (t - mean) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
            })
            .collect();
        GriddedFunction::new(start, step, values).unwrap()
    }

    #[test]
    fn constants_stay_constant() {
        let f = GriddedFunction::new(-3.0, 0.05, vec![1.0; 200]).unwrap();
        let g = gauss_convolve(&f, 0.5).unwrap();
        assert!(!g.is_empty());
        for v in &g.values {
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn mean_shifts_by_half_r_squared() {
        let r = 0.4;
        let f = gaussian_bump(-8.0, 0.04, 400, 0.0, 0.7);
        let g = gauss_convolve(&f, r).unwrap();
        // Phi_r shifts the mean by +r^2/2.
        assert!((g.density_mean() - 0.5 * r * r).abs() < 1e-3, "{}", g.density_mean());
    }

    #[test]
    fn semigroup_composition() {
        // Phi_r Phi_r = Phi_{r sqrt 2} on a smooth density, compared on the
        // common grid window.
        let r = 0.4;
        let f = gaussian_bump(-10.0, 0.04, 500, 0.0, 0.8);
        let twice = gauss_convolve(&gauss_convolve(&f, r).unwrap(), r).unwrap();
        let once = gauss_convolve(&f, r * std::f64::consts::SQRT_2).unwrap();
        let offset = ((twice.start - once.start) / once.step).round() as i64;
        let mut worst = 0.0f64;
        for (i, v) in twice.values.iter().enumerate() {
            let j = i as i64 + offset;
            if j >= 0 && (j as usize) < once.len() {
                worst = worst.max((v - once.values[j as usize]).abs());
            }
        }
        assert!(worst < 5e-4, "semigroup deviation {worst}");
    }

    #[test]
    fn coarse_grid_is_refused() {
        let f = GriddedFunction::new(0.0, 0.2, vec![1.0; 100]).unwrap();
        assert!(matches!(
            gauss_convolve(&f, 0.5),
            Err(GaussError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn short_grid_is_refused() {
        let f = GriddedFunction::new(0.0, 0.05, vec![1.0; 10]).unwrap();
        assert!(matches!(gauss_convolve(&f, 0.5), Err(GaussError::GridTooShort)));
    }
}
