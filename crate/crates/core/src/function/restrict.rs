//! Restrictions of expressions to complex affine lines `zeta -> base + zeta * dir`.
//!
//! Restricting once and then evaluating the resulting univariate tree is much
//! cheaper than evaluating the multivariate expression at every point:
//! polynomial pieces become dense univariate polynomials evaluated by Horner's
//! rule, and linear exponents collapse to `a + b zeta`.

use num_complex::Complex64;

use super::expr::{horner, AnalyticExpr};
use super::univariate::UniPoly;
use super::vector::ComplexVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum UniExpr {
    Poly(UniPoly),
    /// `sum_i q_i(zeta) exp(a_i + b_i zeta)`
    Quasi(Vec<(UniPoly, Complex64, Complex64)>),
    Exp(Box<UniExpr>),
    RecipExp(Box<UniExpr>),
    Scale(Complex64, Box<UniExpr>),
    Product(Box<UniExpr>, Box<UniExpr>),
    Compose(Vec<Complex64>, Box<UniExpr>),
    /// Evaluated through the full expression; no exact derivative.
    Opaque(Box<AnalyticExpr>),
}

/// Value and, when available, exact derivative.
type Jet = (Complex64, Option<Complex64>);

impl UniExpr {
    fn compile(expr: &AnalyticExpr, base: &ComplexVector, dir: &ComplexVector) -> Self {
        match expr {
            AnalyticExpr::Poly(p) => Self::Poly(p.restrict_affine(base, dir)),
            AnalyticExpr::Quasi(q) => Self::Quasi(
                q.terms()
                    .iter()
                    .map(|t| {
                        (
                            t.poly.restrict_affine(base, dir),
                            t.exponent.apply(base),
                            t.exponent.apply(dir),
                        )
                    })
                    .collect(),
            ),
            AnalyticExpr::Exp(e) => Self::Exp(Box::new(Self::compile(e, base, dir))),
            AnalyticExpr::ReciprocalExp(e) => Self::RecipExp(Box::new(Self::compile(e, base, dir))),
            AnalyticExpr::Scale(c, e) => Self::Scale(*c, Box::new(Self::compile(e, base, dir))),
            AnalyticExpr::Product(a, b) => Self::Product(
                Box::new(Self::compile(a, base, dir)),
                Box::new(Self::compile(b, base, dir)),
            ),
            AnalyticExpr::Compose(c) => Self::Compose(
                c.series().to_vec(),
                Box::new(Self::compile(c.inner(), base, dir)),
            ),
            AnalyticExpr::DirectionalDerivative(d) => match d.exact() {
                Some(e) => Self::compile(e, base, dir),
                None => Self::Opaque(Box::new(expr.clone())),
            },
        }
    }

    fn jet(&self, zeta: Complex64, base: &ComplexVector, dir: &ComplexVector) -> Jet {
        match self {
            Self::Poly(p) => {
                let (v, d) = p.eval_with_derivative(zeta);
                (v, Some(d))
            }
            Self::Quasi(terms) => {
                let mut v = Complex64::new(0.0, 0.0);
                let mut d = Complex64::new(0.0, 0.0);
                for (q, a, b) in terms {
                    let (qv, qd) = q.eval_with_derivative(zeta);
                    let e = (a + b * zeta).exp();
                    v += qv * e;
                    d += (qd + qv * b) * e;
                }
                (v, Some(d))
            }
            Self::Exp(e) => {
                let (v, d) = e.jet(zeta, base, dir);
                let ev = v.exp();
                (ev, d.map(|d| d * ev))
            }
            Self::RecipExp(e) => {
                let (v, d) = e.jet(zeta, base, dir);
                let ev = (-v).exp();
                (ev, d.map(|d| -d * ev))
            }
            Self::Scale(c, e) => {
                let (v, d) = e.jet(zeta, base, dir);
                (c * v, d.map(|d| c * d))
            }
            Self::Product(a, b) => {
                let (av, ad) = a.jet(zeta, base, dir);
                let (bv, bd) = b.jet(zeta, base, dir);
                (av * bv, ad.zip(bd).map(|(ad, bd)| ad * bv + av * bd))
            }
            Self::Compose(series, inner) => {
                let (w, wd) = inner.jet(zeta, base, dir);
                let mut p = Complex64::new(0.0, 0.0);
                let mut dp = Complex64::new(0.0, 0.0);
                for &c in series.iter().rev() {
                    dp = dp * w + p;
                    p = p * w + c;
                }
                (p, wd.map(|wd| dp * wd))
            }
            Self::Opaque(e) => (e.eval_unchecked(&base.axpy(zeta, dir)), None),
        }
    }

    fn value(&self, zeta: Complex64, base: &ComplexVector, dir: &ComplexVector) -> Complex64 {
        match self {
            Self::Poly(p) => p.eval(zeta),
            Self::Quasi(terms) => terms
                .iter()
                .map(|(q, a, b)| q.eval(zeta) * (a + b * zeta).exp())
                .sum(),
            Self::Exp(e) => e.value(zeta, base, dir).exp(),
            Self::RecipExp(e) => (-e.value(zeta, base, dir)).exp(),
            Self::Scale(c, e) => c * e.value(zeta, base, dir),
            Self::Product(a, b) => a.value(zeta, base, dir) * b.value(zeta, base, dir),
            Self::Compose(series, inner) => horner(series, inner.value(zeta, base, dir)),
            Self::Opaque(e) => e.eval_unchecked(&base.axpy(zeta, dir)),
        }
    }

    fn has_exact_derivative(&self) -> bool {
        match self {
            Self::Poly(_) | Self::Quasi(_) => true,
            Self::Exp(e) | Self::RecipExp(e) | Self::Scale(_, e) | Self::Compose(_, e) => {
                e.has_exact_derivative()
            }
            Self::Product(a, b) => a.has_exact_derivative() && b.has_exact_derivative(),
            Self::Opaque(_) => false,
        }
    }

    fn as_poly(&self) -> Option<&UniPoly> {
        match self {
            Self::Poly(p) => Some(p),
            _ => None,
        }
    }
}

/// The univariate function `zeta -> f(base + zeta * dir)`.
#[derive(Debug, Clone)]
pub struct AffineRestriction {
    base: ComplexVector,
    dir: ComplexVector,
    uni: UniExpr,
}

impl AffineRestriction {
    pub fn new(expr: &AnalyticExpr, base: ComplexVector, dir: ComplexVector) -> Result<Self> {
        base.check_dim(expr.dim())?;
        dir.check_dim(expr.dim())?;
        let uni = UniExpr::compile(expr, &base, &dir);
        Ok(Self { base, dir, uni })
    }

    pub fn base(&self) -> &ComplexVector {
        &self.base
    }

    pub fn direction(&self) -> &ComplexVector {
        &self.dir
    }

    pub fn value(&self, zeta: Complex64) -> Result<Complex64> {
        let v = self.value_unchecked(zeta);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow {
                context: "line restriction",
            })
        }
    }

    #[inline]
    pub fn value_unchecked(&self, zeta: Complex64) -> Complex64 {
        self.uni.value(zeta, &self.base, &self.dir)
    }

    /// Value at a real parameter.
    #[inline]
    pub fn at(&self, t: f64) -> Complex64 {
        self.value_unchecked(Complex64::new(t, 0.0))
    }

    /// Exact derivative in `zeta`, when the expression admits one.
    pub fn exact_derivative(&self, zeta: Complex64) -> Option<Complex64> {
        self.uni.jet(zeta, &self.base, &self.dir).1
    }

    pub fn jet(&self, zeta: Complex64) -> (Complex64, Option<Complex64>) {
        self.uni.jet(zeta, &self.base, &self.dir)
    }

    pub fn has_exact_derivative(&self) -> bool {
        self.uni.has_exact_derivative()
    }

    /// Coefficients of the restriction when the expression is a polynomial.
    pub fn as_polynomial(&self) -> Option<&UniPoly> {
        self.uni.as_poly()
    }
}
