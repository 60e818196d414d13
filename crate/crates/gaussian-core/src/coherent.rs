use num_complex::Complex64;

use crate::contraction::Contraction;
use crate::error::{GaussError, Result};
use crate::vector::RealVector;

/// A coherent vector `c * e(v)` of the Fock realization, where
/// `e(v)(x) = exp(<x, v>)` with complex direction `v`. The amplitude is
/// stored in logarithmic form so that operator factors compose additively
/// (and algebraic cancellations such as `U(i)^4 = id` stay exact).
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentVector {
    log_amplitude: Complex64,
    direction: Vec<Complex64>,
}

/// Complex bilinear form `B(u, w) = sum_i u_i w_i` (no conjugation).
pub(crate) fn bilinear(u: &[Complex64], w: &[Complex64]) -> Complex64 {
    debug_assert_eq!(u.len(), w.len());
    u.iter().zip(w).map(|(a, b)| a * b).sum()
}

fn to_complex(v: &RealVector) -> Vec<Complex64> {
    v.coords().iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

impl CoherentVector {
    /// The Gaussian-normalized exponential vector
    /// `exp_z(xi) = exp(-z^2 ||xi||^2 / 2) * e(z xi)`.
    pub fn exponential(z: Complex64, xi: &RealVector) -> Self {
        let direction: Vec<Complex64> = xi.coords().iter().map(|&x| z * x).collect();
        // -z^2 ||xi||^2 / 2 written through the same bilinear form the
        // operators use, so scale factors cancel exactly under them.
        let log_amplitude = -0.5 * bilinear(&direction, &direction);
        CoherentVector { log_amplitude, direction }
    }

    /// `c * e(v)` for a nonzero amplitude `c`.
    pub fn from_amplitude(c: Complex64, direction: Vec<Complex64>) -> Result<Self> {
        if c == Complex64::ZERO {
            return Err(GaussError::InvalidParameter {
                name: "amplitude",
                reason: "coherent amplitude must be nonzero".into(),
            });
        }
        Ok(CoherentVector {
            log_amplitude: c.ln(),
            direction,
        })
    }

    pub fn from_log_amplitude(log_amplitude: Complex64, direction: Vec<Complex64>) -> Self {
        CoherentVector { log_amplitude, direction }
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn log_amplitude(&self) -> Complex64 {
        self.log_amplitude
    }

    pub fn amplitude(&self) -> Complex64 {
        self.log_amplitude.exp()
    }

    pub fn direction(&self) -> &[Complex64] {
        &self.direction
    }

    /// Pointwise value `c * exp(<x, v>)`; this is what Monte-Carlo oracles
    /// integrate against the Gaussian measure.
    pub fn evaluate(&self, x: &RealVector) -> Result<Complex64> {
        if x.dim() != self.dim() {
            return Err(GaussError::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        let phase: Complex64 = x
            .coords()
            .iter()
            .zip(&self.direction)
            .map(|(&xi, d)| xi * d)
            .sum();
        Ok((self.log_amplitude + phase).exp())
    }

    /// Largest coordinate-wise deviation from `other` in the
    /// (log-amplitude, direction) representation.
    pub fn distance(&self, other: &CoherentVector) -> f64 {
        let mut d = (self.log_amplitude - other.log_amplitude).norm();
        for (a, b) in self.direction.iter().zip(&other.direction) {
            d = d.max((a - b).norm());
        }
        d
    }
}

/// `<c1 e(v), c2 e(w)> = c1 conj(c2) exp(B(v + conj(w), v + conj(w)) / 2)`,
/// the Gaussian pairing of two coherent vectors.
pub fn coherent_inner(a: &CoherentVector, b: &CoherentVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(GaussError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let u: Vec<Complex64> = a
        .direction
        .iter()
        .zip(&b.direction)
        .map(|(x, y)| x + y.conj())
        .collect();
    let exponent = a.log_amplitude + b.log_amplitude.conj() + 0.5 * bilinear(&u, &u);
    Ok(exponent.exp())
}

/// Operators with a closed action on coherent vectors.
pub enum CoherentOp<'a> {
    /// Phase dilation `U(alpha)`: `e(v) -> exp((1 - alpha^2) B(v, v) / 2) e(alpha v)`.
    /// `U(i)` is the Gaussian Fourier transform, `U(-1)` the parity operator.
    Phase(Complex64),
    /// Modulation `M(xi)`: multiplication by `exp(i <x, xi>)`, so `v -> v + i xi`.
    Modulation(&'a RealVector),
    /// Gaussian translation `rho(eta)`: the density-weighted Koopman
    /// operator `f(x) -> exp(-||eta||^2/4 + <x, eta>/2) f(x - eta)`.
    Translation(&'a RealVector),
    /// Second-quantization channel of a contraction `T`; sends `exp_z(xi)`
    /// to `exp_z(T^* xi)`.
    Channel(&'a Contraction),
}

/// Applies `op` to a coherent vector, staying inside the coherent family.
pub fn coherent_apply(op: &CoherentOp, v: &CoherentVector) -> Result<CoherentVector> {
    match op {
        CoherentOp::Phase(alpha) => {
            let b = bilinear(&v.direction, &v.direction);
            let log_amplitude = v.log_amplitude + 0.5 * (Complex64::ONE - alpha * alpha) * b;
            let direction = v.direction.iter().map(|d| alpha * d).collect();
            Ok(CoherentVector { log_amplitude, direction })
        }
        CoherentOp::Modulation(xi) => {
            if xi.dim() != v.dim() {
                return Err(GaussError::DimensionMismatch {
                    expected: v.dim(),
                    got: xi.dim(),
                });
            }
            let direction = v
                .direction
                .iter()
                .zip(xi.coords())
                .map(|(d, &x)| d + Complex64::new(0.0, x))
                .collect();
            Ok(CoherentVector {
                log_amplitude: v.log_amplitude,
                direction,
            })
        }
        CoherentOp::Translation(eta) => {
            if eta.dim() != v.dim() {
                return Err(GaussError::DimensionMismatch {
                    expected: v.dim(),
                    got: eta.dim(),
                });
            }
            let ec = to_complex(eta);
            let log_amplitude =
                v.log_amplitude - 0.25 * eta.norm_sq() - bilinear(&ec, &v.direction);
            let direction = v
                .direction
                .iter()
                .zip(eta.coords())
                .map(|(d, &e)| d + 0.5 * e)
                .collect();
            Ok(CoherentVector { log_amplitude, direction })
        }
        CoherentOp::Channel(t) => {
            if t.dim() != v.dim() {
                return Err(GaussError::DimensionMismatch {
                    expected: v.dim(),
                    got: t.dim(),
                });
            }
            // Psi_T (c e(v)) = c exp(B((I - T T^*) v, v) / 2) e(T^* v).
            let m = t.matrix();
            let d = t.dim();
            let mut ttv = vec![Complex64::ZERO; d]; // T^* v
            for i in 0..d {
                for j in 0..d {
                    ttv[i] += m[(j, i)] * v.direction[j];
                }
            }
            // B((I - T T^*) v, v) = B(v, v) - B(T^* v, T^* v).
            let b = bilinear(&v.direction, &v.direction) - bilinear(&ttv, &ttv);
            Ok(CoherentVector {
                log_amplitude: v.log_amplitude + 0.5 * b,
                direction: ttv,
            })
        }
    }
}
