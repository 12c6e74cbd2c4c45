use std::f64::consts::TAU;

use num_complex::Complex64;

use super::poly::MultiPoly;
use super::quasi::QuasiPolynomial;
use super::vector::ComplexVector;
use crate::error::{invalid, Error, Result};

/// Default number of power-series coefficients kept for a composition.
pub const DEFAULT_SERIES_LENGTH: usize = 64;

/// A function holomorphic on a complex ball, given as an expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticExpr {
    Poly(MultiPoly),
    Quasi(QuasiPolynomial),
    Exp(Box<AnalyticExpr>),
    Product(Box<AnalyticExpr>, Box<AnalyticExpr>),
    Scale(Complex64, Box<AnalyticExpr>),
    /// `phi(inner)` with `phi` a truncated power series.
    Compose(Composition),
    DirectionalDerivative(DirectionalDerivative),
    /// `e^{-g}`.
    ReciprocalExp(Box<AnalyticExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    series: Vec<Complex64>,
    convergence_radius: Option<f64>,
    inner: Box<AnalyticExpr>,
}

impl Composition {
    pub fn series(&self) -> &[Complex64] {
        &self.series
    }

    pub fn inner(&self) -> &AnalyticExpr {
        &self.inner
    }

    pub fn convergence_radius(&self) -> Option<f64> {
        self.convergence_radius
    }
}

/// `(a, D)^m f`.
///
/// When `f` is a polynomial or quasipolynomial the derivative is expanded
/// symbolically at construction and stored in `exact`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalDerivative {
    direction: ComplexVector,
    order: u32,
    inner: Box<AnalyticExpr>,
    exact: Option<Box<AnalyticExpr>>,
}

impl DirectionalDerivative {
    pub fn direction(&self) -> &ComplexVector {
        &self.direction
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn inner(&self) -> &AnalyticExpr {
        &self.inner
    }

    pub fn exact(&self) -> Option<&AnalyticExpr> {
        self.exact.as_deref()
    }
}

/// Coefficients `1/j!` of the exponential series.
pub fn exp_series(len: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len);
    let mut c = 1.0;
    for j in 0..len {
        if j > 0 {
            c /= j as f64;
        }
        out.push(Complex64::new(c, 0.0));
    }
    out
}

impl AnalyticExpr {
    pub fn poly(p: MultiPoly) -> Self {
        Self::Poly(p)
    }

    pub fn quasi(q: QuasiPolynomial) -> Self {
        Self::Quasi(q)
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::Poly(MultiPoly::constant(dim, Complex64::new(c, 0.0)))
    }

    /// The coordinate function `z_j` (0-based).
    pub fn coordinate(dim: usize, j: usize) -> Self {
        Self::Poly(MultiPoly::variable(dim, j))
    }

    pub fn exp(arg: Self) -> Self {
        Self::Exp(Box::new(arg))
    }

    pub fn recip_exp(arg: Self) -> Self {
        Self::ReciprocalExp(Box::new(arg))
    }

    pub fn scale(c: Complex64, arg: Self) -> Self {
        Self::Scale(c, Box::new(arg))
    }

    pub fn product(left: Self, right: Self) -> Result<Self> {
        if left.dim() != right.dim() {
            return Err(Error::DimensionMismatch {
                expected: left.dim(),
                got: right.dim(),
            });
        }
        Ok(Self::Product(Box::new(left), Box::new(right)))
    }

    pub fn compose(series: Vec<Complex64>, inner: Self) -> Result<Self> {
        Self::compose_with_radius(series, None, inner)
    }

    pub fn compose_with_radius(
        series: Vec<Complex64>,
        convergence_radius: Option<f64>,
        inner: Self,
    ) -> Result<Self> {
        if series.is_empty() {
            return Err(invalid("composition needs at least one series coefficient"));
        }
        if series.iter().any(|c| !c.is_finite()) {
            return Err(invalid("series coefficients must be finite"));
        }
        if let Some(r) = convergence_radius {
            if !(r > 0.0) {
                return Err(invalid("convergence radius must be positive"));
            }
        }
        Ok(Self::Compose(Composition {
            series,
            convergence_radius,
            inner: Box::new(inner),
        }))
    }

    pub fn directional_derivative(
        direction: ComplexVector,
        order: u32,
        inner: Self,
    ) -> Result<Self> {
        direction.check_dim(inner.dim())?;
        let exact = match &inner {
            Self::Poly(p) => {
                let mut d = p.clone();
                for _ in 0..order {
                    d = d.directional(&direction);
                }
                Some(Box::new(Self::Poly(d)))
            }
            Self::Quasi(q) => {
                let mut d = q.clone();
                for _ in 0..order {
                    d = d.directional(&direction);
                }
                Some(Box::new(Self::Quasi(d)))
            }
            _ => None,
        };
        Ok(Self::DirectionalDerivative(DirectionalDerivative {
            direction,
            order,
            inner: Box::new(inner),
            exact,
        }))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Poly(p) => p.dim(),
            Self::Quasi(q) => q.dim(),
            Self::Exp(e) | Self::ReciprocalExp(e) | Self::Scale(_, e) => e.dim(),
            Self::Product(a, _) => a.dim(),
            Self::Compose(c) => c.inner.dim(),
            Self::DirectionalDerivative(d) => d.direction.dim(),
        }
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        match self {
            Self::Poly(p) => Some(p),
            _ => None,
        }
    }

    /// The expression as a quasipolynomial, when it is one syntactically.
    pub fn as_quasi(&self) -> Option<QuasiPolynomial> {
        match self {
            Self::Poly(p) => Some(QuasiPolynomial::from_poly(p.clone())),
            Self::Quasi(q) => Some(q.clone()),
            _ => None,
        }
    }

    pub fn evaluate(&self, z: &ComplexVector) -> Result<Complex64> {
        z.check_dim(self.dim())?;
        let v = self.eval_unchecked(z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow {
                context: "expression evaluation",
            })
        }
    }

    pub(crate) fn eval_unchecked(&self, z: &ComplexVector) -> Complex64 {
        match self {
            Self::Poly(p) => p.evaluate(z),
            Self::Quasi(q) => q.evaluate(z),
            Self::Exp(e) => e.eval_unchecked(z).exp(),
            Self::ReciprocalExp(e) => (-e.eval_unchecked(z)).exp(),
            Self::Scale(c, e) => c * e.eval_unchecked(z),
            Self::Product(a, b) => a.eval_unchecked(z) * b.eval_unchecked(z),
            Self::Compose(c) => horner(&c.series, c.inner.eval_unchecked(z)),
            Self::DirectionalDerivative(d) => match &d.exact {
                Some(e) => e.eval_unchecked(z),
                None => cauchy_directional(&d.inner, z, &d.direction, d.order),
            },
        }
    }

    /// Sampled check that a composition's inner function stays inside the
    /// series' disk of convergence on the ball of radius `ball_radius`.
    /// Returns one message per offending composition node.
    pub fn composition_warnings(&self, ball_radius: f64, points: &[ComplexVector]) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_warnings(ball_radius, points, &mut out);
        out
    }

    fn collect_warnings(&self, ball_radius: f64, points: &[ComplexVector], out: &mut Vec<String>) {
        match self {
            Self::Poly(_) | Self::Quasi(_) => {}
            Self::Exp(e) | Self::ReciprocalExp(e) | Self::Scale(_, e) => {
                e.collect_warnings(ball_radius, points, out)
            }
            Self::Product(a, b) => {
                a.collect_warnings(ball_radius, points, out);
                b.collect_warnings(ball_radius, points, out);
            }
            Self::DirectionalDerivative(d) => d.inner.collect_warnings(ball_radius, points, out),
            Self::Compose(c) => {
                c.inner.collect_warnings(ball_radius, points, out);
                if let Some(radius) = c.convergence_radius {
                    let worst = points
                        .iter()
                        .map(|p| c.inner.eval_unchecked(&p.scale_real(ball_radius)).norm())
                        .fold(0.0, f64::max);
                    if worst >= radius {
                        out.push(format!(
                            "composition inner value reaches {worst:.4} >= convergence radius {radius}"
                        ));
                    }
                }
            }
        }
    }
}

pub(crate) fn horner(series: &[Complex64], w: Complex64) -> Complex64 {
    series
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
}

/// `(a, D)^m f(z)` as `m!/(2 pi i)` times a contour integral of
/// `f(z + zeta a) / zeta^{m+1}` over a small circle.
fn cauchy_directional(f: &AnalyticExpr, z: &ComplexVector, a: &ComplexVector, m: u32) -> Complex64 {
    if m == 0 {
        return f.eval_unchecked(z);
    }
    let a_norm = a.norm();
    if a_norm == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let radius = 0.25 / a_norm;
    let nodes = 64 + 8 * m as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let w = Complex64::from_polar(1.0, TAU * k as f64 / nodes as f64);
        let zeta = w * radius;
        acc += f.eval_unchecked(&z.axpy(zeta, a)) * w.powi(-(m as i32));
    }
    let factorial: f64 = (1..=m).map(f64::from).product();
    acc * (factorial / (nodes as f64 * radius.powi(m as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = AnalyticExpr::exp(AnalyticExpr::Poly(MultiPoly::zero(3)));
        let z = ComplexVector::from_real(&[0.3, -2.0, 5.0]).unwrap();
        assert_eq!(e.evaluate(&z).unwrap(), real(1.0));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let e = AnalyticExpr::coordinate(2, 0);
        let z = ComplexVector::from_real(&[1.0]).unwrap();
        assert_eq!(
            e.evaluate(&z),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn overflow_is_reported() {
        let e = AnalyticExpr::exp(AnalyticExpr::scale(
            real(1e3),
            AnalyticExpr::coordinate(1, 0),
        ));
        let z = ComplexVector::from_real(&[1.0]).unwrap();
        assert!(matches!(e.evaluate(&z), Err(Error::Overflow { .. })));
    }

    #[test]
    fn exact_and_cauchy_derivatives_agree() {
        // (a,D)^2 of z1^3 z2 via exact expansion vs contour integral of exp(log) form
        let p = MultiPoly::monomial(2, 0, 3).mul(&MultiPoly::variable(2, 1));
        let a = ComplexVector::new(vec![real(0.5), Complex64::new(0.0, 1.0)]).unwrap();
        let exact =
            AnalyticExpr::directional_derivative(a.clone(), 2, AnalyticExpr::Poly(p.clone()))
                .unwrap();
        // Scale by 1 forces the contour route
        let contour = AnalyticExpr::directional_derivative(
            a,
            2,
            AnalyticExpr::scale(real(1.0), AnalyticExpr::Poly(p)),
        )
        .unwrap();
        let z = ComplexVector::new(vec![Complex64::new(0.2, 0.1), real(-0.4)]).unwrap();
        let d1 = exact.evaluate(&z).unwrap();
        let d2 = contour.evaluate(&z).unwrap();
        assert!((d1 - d2).norm() < 1e-10, "{d1} vs {d2}");
    }

    #[test]
    fn exp_series_matches_exp() {
        let s = exp_series(DEFAULT_SERIES_LENGTH);
        let w = Complex64::new(0.3, -0.7);
        assert!((horner(&s, w) - w.exp()).norm() < 1e-15);
    }

    #[test]
    fn composition_warning_fires_outside_radius() {
        let f = AnalyticExpr::compose_with_radius(
            exp_series(8),
            Some(0.5),
            AnalyticExpr::coordinate(1, 0),
        )
        .unwrap();
        let pts = vec![ComplexVector::from_real(&[1.0]).unwrap()];
        assert_eq!(f.composition_warnings(1.0, &pts).len(), 1);
        assert!(f.composition_warnings(0.25, &pts).is_empty());
    }
}
