use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Dense univariate polynomial, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![ZERO] }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Horner evaluation of the value and the first derivative together.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * j as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|j| {
                self.coeffs.get(j).copied().unwrap_or(ZERO)
                    + other.coeffs.get(j).copied().unwrap_or(ZERO)
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Composition `self(inner(z))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, &c| {
            acc.mul(inner).add(&Self::constant(c))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_with_derivative() {
        // 1 + 2z + 3z^2 at z = 2: value 17, derivative 14
        let p = UniPoly::from_real(&[1.0, 2.0, 3.0]);
        let (v, d) = p.eval_with_derivative(Complex64::new(2.0, 0.0));
        assert_eq!(v, Complex64::new(17.0, 0.0));
        assert_eq!(d, Complex64::new(14.0, 0.0));
        assert_eq!(p.derivative(), UniPoly::from_real(&[2.0, 6.0]));
    }

    #[test]
    fn composition_degree_multiplies() {
        let p = UniPoly::from_real(&[0.0, 0.0, 1.0]);
        let q = UniPoly::from_real(&[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(p.compose(&q).degree(), 6);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(UniPoly::from_real(&[1.0, 0.0, 0.0]).degree(), 0);
        assert!(UniPoly::from_real(&[]).is_zero());
    }
}
