use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{GaussError, Result};
use crate::gaussian::standard_normal_vector;
use crate::rng::{mc_over_substreams, McEstimate};
use crate::vector::RealVector;

/// Tolerance for accepting an operator norm as at most one, and for
/// clamping small negative eigenvalues in PSD square roots.
const PSD_TOL: f64 = 1e-10;

/// A linear contraction `T` of `R^d` (operator norm at most 1), together
/// with the defect square roots needed for its unitary dilation.
#[derive(Clone, Debug)]
pub struct Contraction {
    matrix: DMatrix<f64>,
}

impl Contraction {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.nrows() != matrix.ncols() {
            return Err(GaussError::InvalidParameter {
                name: "matrix",
                reason: format!("expected nonempty square matrix, got {}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(GaussError::NonFinite { what: "contraction matrix" });
        }
        let op_norm = operator_norm(&matrix);
        if op_norm > 1.0 + PSD_TOL {
            return Err(GaussError::NotAContraction { op_norm });
        }
        Ok(Contraction { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `(I - T T^*)^{1/2}`, the defect on the output side.
    pub fn defect_sqrt_left(&self) -> DMatrix<f64> {
        let d = self.dim();
        let m = DMatrix::identity(d, d) - &self.matrix * self.matrix.transpose();
        // The defect of a contraction is PSD up to rounding, so this cannot fail.
        psd_sqrt(&m).expect("defect of a contraction is PSD")
    }

    /// `(I - T^* T)^{1/2}`, the defect on the input side.
    pub fn defect_sqrt_right(&self) -> DMatrix<f64> {
        let d = self.dim();
        let m = DMatrix::identity(d, d) - self.matrix.transpose() * &self.matrix;
        psd_sqrt(&m).expect("defect of a contraction is PSD")
    }

    /// The orthogonal dilation on `R^d x R^d`:
    /// rows `[T, (I - T T^*)^{1/2}; (I - T^* T)^{1/2}, -T^*]`.
    pub fn dilation(&self) -> DMatrix<f64> {
        let d = self.dim();
        let a = self.defect_sqrt_left();
        let b = self.defect_sqrt_right();
        let mut u = DMatrix::zeros(2 * d, 2 * d);
        u.view_mut((0, 0), (d, d)).copy_from(&self.matrix);
        u.view_mut((0, d), (d, d)).copy_from(&a);
        u.view_mut((d, 0), (d, d)).copy_from(&b);
        u.view_mut((d, d), (d, d)).copy_from(&(-self.matrix.transpose()));
        u
    }
}

fn operator_norm(m: &DMatrix<f64>) -> f64 {
    let gram = m.transpose() * m;
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.max(0.0))).sqrt()
}

/// Square root of a symmetric PSD matrix via its eigendecomposition.
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything lower is an
/// error.
pub fn psd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(GaussError::InvalidParameter {
            name: "matrix",
            reason: format!("expected square matrix, got {}x{}", m.nrows(), m.ncols()),
        });
    }
    let sym = 0.5 * (m + m.transpose());
    let eig = SymmetricEigen::new(sym);
    let mut roots = eig.eigenvalues.clone();
    for l in roots.iter_mut() {
        if *l < -PSD_TOL {
            return Err(GaussError::NotPositiveSemidefinite { eigenvalue: *l });
        }
        *l = l.max(0.0).sqrt();
    }
    let d = DMatrix::from_diagonal(&roots);
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Monte-Carlo second-quantization channel: averages
/// `f(T x + (I - T T^*)^{1/2} eta)` over fresh Gaussian `eta`. On coherent
/// test functions this converges to the closed form with direction `T^* xi`.
pub fn contraction_channel_mc<F>(
    t: &Contraction,
    f: F,
    x: &RealVector,
    samples: u64,
    seed: u64,
) -> Result<McEstimate>
where
    F: Fn(&RealVector) -> f64 + Sync,
{
    if x.dim() != t.dim() {
        return Err(GaussError::DimensionMismatch {
            expected: t.dim(),
            got: x.dim(),
        });
    }
    if samples == 0 {
        return Err(GaussError::EmptyInput { name: "samples" });
    }
    let dim = t.dim();
    let defect = t.defect_sqrt_left();
    let base = {
        let xv = nalgebra::DVector::from_column_slice(x.coords());
        t.matrix() * xv
    };
    let acc = mc_over_substreams(seed, samples, |rng| {
        let eta = standard_normal_vector(rng, dim);
        let ev = nalgebra::DVector::from_column_slice(eta.coords());
        let pt = &base + &defect * ev;
        f(&RealVector::new(pt.iter().copied().collect()))
    });
    Ok(acc.estimate())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_t() -> Contraction {
        Contraction::new(DMatrix::from_row_slice(2, 2, &[0.6, 0.3, -0.2, 0.5])).unwrap()
    }

    #[test]
    fn rejects_expanding_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[1.2, 0.0, 0.0, 0.3]);
        assert!(matches!(Contraction::new(m), Err(GaussError::NotAContraction { .. })));
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let r = psd_sqrt(&m).unwrap();
        let back = &r * &r;
        assert!((back - m).amax() < 1e-12);
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -0.5]);
        assert!(psd_sqrt(&m).is_err());
    }

    #[test]
    fn dilation_is_orthogonal() {
        let u = example_t().dilation();
        let gram = &u * u.transpose();
        let id = DMatrix::identity(4, 4);
        assert!((gram - id).amax() < 1e-10);
    }

    #[test]
    fn isometry_dilates_trivially() {
        // For an orthogonal T both defects vanish and the dilation is block
        // diagonal.
        let theta: f64 = 0.7;
        let m = DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
        let t = Contraction::new(m).unwrap();
        assert!(t.defect_sqrt_left().amax() < 1e-7);
        assert!(t.defect_sqrt_right().amax() < 1e-7);
    }
}
