use std::ops::{Add, Index, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// A point or direction of `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(invalid("complex vector must have dimension >= 1"));
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(invalid("complex vector entries must be finite"));
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// The `j`-th standard basis vector.
    pub fn basis(dim: usize, j: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[j] = Complex64::new(1.0, 0.0);
        v
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `sum x_j conj(y_j)`.
    pub fn hermitian(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(x, y)| x * y.conj()).sum()
    }

    /// Real inner product of the underlying `R^{2n}` vectors.
    pub fn real_dot(&self, other: &Self) -> f64 {
        self.hermitian(other).re
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    /// `self + c * dir`.
    pub fn axpy(&self, c: Complex64, dir: &Self) -> Self {
        Self(self.0.iter().zip(&dir.0).map(|(x, v)| x + c * v).collect())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(invalid("cannot normalize a zero vector"));
        }
        Ok(self.scale_real(1.0 / n))
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// True when every entry has a zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, j: usize) -> &Complex64 {
        &self.0[j]
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;

    fn add(self, rhs: &ComplexVector) -> ComplexVector {
        ComplexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;

    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        ComplexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}
