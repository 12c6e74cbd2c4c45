use std::collections::BTreeMap;

use num_complex::Complex64;

use super::univariate::UniPoly;
use super::vector::ComplexVector;
use crate::error::{invalid, Result};

/// Exponent tuple of a monomial.
pub type MultiIndex = Vec<u32>;

/// A polynomial in `n` complex variables with complex coefficients.
///
/// Zero coefficients are never stored, so the zero polynomial has an empty
/// term map. Its degree is reported as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl MultiPoly {
    pub fn new<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        if dim == 0 {
            return Err(invalid("polynomial dimension must be >= 1"));
        }
        let mut map = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.len() != dim {
                return Err(invalid(format!(
                    "exponent tuple {exp:?} has length {}, expected {dim}",
                    exp.len()
                )));
            }
            if !coef.is_finite() {
                return Err(invalid("polynomial coefficients must be finite"));
            }
            *map.entry(exp).or_insert(Complex64::new(0.0, 0.0)) += coef;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { dim, terms: map })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::new(dim, [(vec![0; dim], c)]).expect("valid constant")
    }

    /// The coordinate function `z_j` (0-based).
    pub fn variable(dim: usize, j: usize) -> Self {
        let mut exp = vec![0; dim];
        exp[j] = 1;
        Self::new(dim, [(exp, Complex64::new(1.0, 0.0))]).expect("valid variable")
    }

    /// `z_j^k`.
    pub fn monomial(dim: usize, j: usize, k: u32) -> Self {
        let mut exp = vec![0; dim];
        exp[j] = k;
        Self::new(dim, [(exp, Complex64::new(1.0, 0.0))]).expect("valid monomial")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// True when every coefficient is real.
    pub fn has_real_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    pub fn evaluate(&self, z: &ComplexVector) -> Complex64 {
        debug_assert_eq!(z.dim(), self.dim);
        let powers = self.power_table(z.entries());
        self.terms
            .iter()
            .map(|(exp, c)| {
                exp.iter()
                    .enumerate()
                    .fold(*c, |acc, (j, &e)| acc * powers[j][e as usize])
            })
            .sum()
    }

    fn max_exponents(&self) -> Vec<u32> {
        let mut max = vec![0; self.dim];
        for exp in self.terms.keys() {
            for (m, &e) in max.iter_mut().zip(exp) {
                *m = (*m).max(e);
            }
        }
        max
    }

    fn power_table(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.max_exponents()
            .iter()
            .zip(z)
            .map(|(&m, &zj)| {
                let mut row = Vec::with_capacity(m as usize + 1);
                let mut p = Complex64::new(1.0, 0.0);
                row.push(p);
                for _ in 0..m {
                    p *= zj;
                    row.push(p);
                }
                row
            })
            .collect()
    }

    /// Partial derivative with respect to `z_j`.
    pub fn partial(&self, j: usize) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e[j] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[j] -= 1;
            (e2, c * f64::from(e[j]))
        });
        Self::new(self.dim, terms).expect("derivative of a valid polynomial")
    }

    /// `(a, D) p = sum_i a_i dp/dz_i`.
    pub fn directional(&self, a: &ComplexVector) -> Self {
        let mut acc = Self::zero(self.dim);
        for (j, &aj) in a.iter().enumerate() {
            if aj != Complex64::new(0.0, 0.0) {
                acc = acc.add(&self.partial(j).scale(aj));
            }
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let terms = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(e, c)| (e.clone(), *c));
        Self::new(self.dim, terms).expect("sum of valid polynomials")
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c));
        Self::new(self.dim, terms).expect("scaled polynomial")
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: MultiIndex = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                terms.push((e, c1 * c2));
            }
        }
        Self::new(self.dim, terms).expect("product of valid polynomials")
    }

    /// The univariate polynomial `zeta -> p(base + zeta * dir)`.
    pub fn restrict_affine(&self, base: &ComplexVector, dir: &ComplexVector) -> UniPoly {
        let max = self.max_exponents();
        // powers[j][e] = (base_j + zeta dir_j)^e as a coefficient vector
        let powers: Vec<Vec<UniPoly>> = max
            .iter()
            .enumerate()
            .map(|(j, &m)| {
                let lin = UniPoly::new(vec![base[j], dir[j]]);
                let mut row = vec![UniPoly::one()];
                for e in 0..m as usize {
                    let next = row[e].mul(&lin);
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = UniPoly::zero();
        for (exp, &c) in &self.terms {
            let mut term = UniPoly::constant(c);
            for (j, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[j][e as usize]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn monomial_evaluation() {
        let p = MultiPoly::monomial(2, 0, 2);
        let z = ComplexVector::from_real(&[2.0, 0.0]).unwrap();
        assert_eq!(p.evaluate(&z), c(4.0));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = MultiPoly::new(2, [(vec![1, 0], c(1.0)), (vec![1, 0], c(-1.0))]).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn rejects_wrong_exponent_length() {
        assert!(MultiPoly::new(2, [(vec![1], c(1.0))]).is_err());
    }

    #[test]
    fn directional_derivative_of_product() {
        // p = z1 * z2, (a,D)p = a1 z2 + a2 z1
        let p = MultiPoly::variable(2, 0).mul(&MultiPoly::variable(2, 1));
        let a = ComplexVector::from_real(&[2.0, 3.0]).unwrap();
        let z = ComplexVector::from_real(&[5.0, 7.0]).unwrap();
        assert_eq!(p.directional(&a).evaluate(&z), c(2.0 * 7.0 + 3.0 * 5.0));
    }

    #[test]
    fn affine_restriction_matches_evaluation() {
        let p = MultiPoly::new(
            2,
            [
                (vec![2, 1], Complex64::new(1.5, -0.5)),
                (vec![0, 3], c(2.0)),
                (vec![0, 0], c(-1.0)),
            ],
        )
        .unwrap();
        let base = ComplexVector::new(vec![Complex64::new(0.1, 0.2), c(-0.3)]).unwrap();
        let dir = ComplexVector::new(vec![c(0.6), Complex64::new(0.0, 0.8)]).unwrap();
        let uni = p.restrict_affine(&base, &dir);
        for k in 0..7 {
            let zeta = Complex64::new(0.3 * k as f64 - 1.0, 0.1 * k as f64);
            let direct = p.evaluate(&base.axpy(zeta, &dir));
            assert!((uni.eval(zeta) - direct).norm() < 1e-12);
        }
    }
}
