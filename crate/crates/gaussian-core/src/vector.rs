use crate::error::{GaussError, Result};

/// A point of the Gaussian space `R^d`, or a vector of its Cameron-Martin
/// space (the two coincide for finite-dimensional truncations).
#[derive(Clone, Debug, PartialEq)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(coords: Vec<f64>) -> Self {
        RealVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RealVector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    /// Checks that `other` lives in the same space; used by the fallible
    /// entry points before doing arithmetic.
    pub fn check_dim(&self, other: &RealVector) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(GaussError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            })
        }
    }

    pub fn dot(&self, other: &RealVector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn add(&self, other: &RealVector) -> RealVector {
        debug_assert_eq!(self.dim(), other.dim());
        RealVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RealVector) -> RealVector {
        debug_assert_eq!(self.dim(), other.dim());
        RealVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> RealVector {
        RealVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|a| a.is_finite())
    }
}

impl From<Vec<f64>> for RealVector {
    fn from(coords: Vec<f64>) -> Self {
        RealVector(coords)
    }
}

impl std::ops::Index<usize> for RealVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_and_norms() {
        let u = RealVector::new(vec![3.0, 4.0]);
        let v = RealVector::new(vec![1.0, -2.0]);
        assert_eq!(u.dot(&v), -5.0);
        assert_eq!(u.norm_sq(), 25.0);
        assert_eq!(u.norm(), 5.0);
    }

    #[test]
    fn dim_check_rejects_mismatch() {
        let u = RealVector::zeros(2);
        let v = RealVector::zeros(3);
        assert!(u.check_dim(&v).is_err());
    }
}
