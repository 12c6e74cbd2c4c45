use num_complex::Complex64;

use super::poly::MultiPoly;
use super::vector::ComplexVector;
use crate::error::{invalid, Result};

/// A complex linear functional `z -> sum c_j z_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFunctional {
    coefficients: ComplexVector,
}

impl LinearFunctional {
    pub fn new(coefficients: ComplexVector) -> Self {
        Self { coefficients }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(ComplexVector::zeros(dim))
    }

    pub fn coefficients(&self) -> &ComplexVector {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.coefficients.dim()
    }

    pub fn apply(&self, z: &ComplexVector) -> Complex64 {
        self.coefficients
            .iter()
            .zip(z.iter())
            .map(|(c, x)| c * x)
            .sum()
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coefficients.norm()
    }
}

/// A term `p(z) e^{f(z)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiTerm {
    pub poly: MultiPoly,
    pub exponent: LinearFunctional,
}

/// A finite sum `sum_i p_i(z) e^{f_i(z)}`.
///
/// Terms with a zero polynomial are dropped at construction; if every term
/// vanishes a single zero term is kept so that `k >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiPolynomial {
    dim: usize,
    terms: Vec<QuasiTerm>,
}

impl QuasiPolynomial {
    pub fn new(terms: Vec<(MultiPoly, LinearFunctional)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(invalid("a quasipolynomial needs at least one term"));
        };
        let dim = first.0.dim();
        for (p, f) in &terms {
            if p.dim() != dim || f.dim() != dim {
                return Err(invalid("quasipolynomial terms must share one dimension"));
            }
        }
        let mut kept: Vec<QuasiTerm> = terms
            .into_iter()
            .filter(|(p, _)| !p.is_zero())
            .map(|(poly, exponent)| QuasiTerm { poly, exponent })
            .collect();
        if kept.is_empty() {
            kept.push(QuasiTerm {
                poly: MultiPoly::zero(dim),
                exponent: LinearFunctional::zero(dim),
            });
        }
        Ok(Self { dim, terms: kept })
    }

    /// A polynomial viewed as a quasipolynomial with zero spectrum.
    pub fn from_poly(p: MultiPoly) -> Self {
        let dim = p.dim();
        Self::new(vec![(p, LinearFunctional::zero(dim))]).expect("single term")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[QuasiTerm] {
        &self.terms
    }

    /// Number of terms `k`.
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree `m = sum_i (1 + deg p_i)`.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| 1 + t.poly.degree()).sum()
    }

    /// Spectrum norm `M = max_i |f_i|`.
    pub fn spectrum_norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.exponent.norm())
            .fold(0.0, f64::max)
    }

    pub fn evaluate(&self, z: &ComplexVector) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.poly.evaluate(z) * t.exponent.apply(z).exp())
            .sum()
    }

    /// `(a, D)(p e^f) = ((a, D)p + f(a) p) e^f`, term by term.
    pub fn directional(&self, a: &ComplexVector) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let fa = t.exponent.apply(a);
                (
                    t.poly.directional(a).add(&t.poly.scale(fa)),
                    t.exponent.clone(),
                )
            })
            .collect();
        Self::new(terms).expect("derivative keeps dimensions")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn functional(re: &[f64]) -> LinearFunctional {
        LinearFunctional::new(ComplexVector::from_real(re).unwrap())
    }

    #[test]
    fn exponential_term_evaluates_to_e() {
        let q = QuasiPolynomial::new(vec![(
            MultiPoly::constant(2, Complex64::new(1.0, 0.0)),
            functional(&[1.0, 0.0]),
        )])
        .unwrap();
        let z = ComplexVector::from_real(&[1.0, 1.0]).unwrap();
        let v = q.evaluate(&z);
        assert!((v - Complex64::new(std::f64::consts::E, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn degree_and_spectrum() {
        let q = QuasiPolynomial::new(vec![
            (MultiPoly::monomial(2, 0, 2), functional(&[3.0, 4.0])),
            (MultiPoly::variable(2, 1), functional(&[1.0, 0.0])),
        ])
        .unwrap();
        assert_eq!(q.degree(), 3 + 2);
        assert_eq!(q.n_terms(), 2);
        assert!((q.spectrum_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn zero_terms_are_dropped() {
        let q = QuasiPolynomial::new(vec![
            (MultiPoly::zero(1), functional(&[2.0])),
            (MultiPoly::variable(1, 0), functional(&[1.0])),
        ])
        .unwrap();
        assert_eq!(q.n_terms(), 1);
        assert_eq!(q.degree(), 2);
    }
}
