use num_complex::Complex64;

use super::expr::AnalyticExpr;
use super::restrict::AffineRestriction;
use super::vector::ComplexVector;
use crate::error::{Error, Result};

const ORTHO_TOL: f64 = 1e-12;

/// The complex line `{x + v z sqrt(s^2 - |x|^2)}` with `<x, v> = 0`, `|v| = 1`.
///
/// The unit disk of the parameter `z` covers the slice of the line inside the
/// ball of radius `s`; the disk of radius `t/s` covers its slice inside the
/// ball of radius `t < s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLine {
    x: ComplexVector,
    v: ComplexVector,
    s: f64,
}

impl ComplexLine {
    pub fn new(x: ComplexVector, v: ComplexVector, s: f64) -> Result<Self> {
        v.check_dim(x.dim())?;
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidLine(format!("radius {s} must be positive")));
        }
        if (v.norm() - 1.0).abs() > ORTHO_TOL {
            return Err(Error::InvalidLine(format!(
                "direction norm {} != 1",
                v.norm()
            )));
        }
        let ip = x.hermitian(&v).norm();
        if ip > ORTHO_TOL {
            return Err(Error::InvalidLine(format!("<x, v> = {ip:e} is not zero")));
        }
        if x.norm() >= s {
            return Err(Error::InvalidLine(format!(
                "base point norm {} is not below s = {s}",
                x.norm()
            )));
        }
        Ok(Self { x, v, s })
    }

    pub fn base(&self) -> &ComplexVector {
        &self.x
    }

    pub fn direction(&self) -> &ComplexVector {
        &self.v
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `sqrt(s^2 - |x|^2)`.
    pub fn scale(&self) -> f64 {
        (self.s * self.s - self.x.norm_sqr()).sqrt()
    }

    pub fn point(&self, z: Complex64) -> ComplexVector {
        self.x.axpy(z * self.scale(), &self.v)
    }

    /// `F(z) = f(x + v z sqrt(s^2 - |x|^2))`.
    pub fn restrict(&self, f: &AnalyticExpr) -> Result<AffineRestriction> {
        AffineRestriction::new(f, self.x.clone(), self.v.scale_real(self.scale()))
    }
}

/// Segment `{base + t u : t_lo <= t <= t_hi}` of a real line in `C^n = R^{2n}`.
///
/// `u` is a unit vector of `R^{2n}` stored as a complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSegment {
    base: ComplexVector,
    direction: ComplexVector,
    t_lo: f64,
    t_hi: f64,
}

impl RealSegment {
    /// Segment inside the closed ball of radius `radius` (checked at both
    /// endpoints, which suffices by convexity).
    pub fn new(
        base: ComplexVector,
        direction: ComplexVector,
        t_lo: f64,
        t_hi: f64,
        radius: f64,
    ) -> Result<Self> {
        direction.check_dim(base.dim())?;
        if !(t_lo < t_hi) {
            return Err(Error::InvalidLine(format!(
                "empty parameter range [{t_lo}, {t_hi}]"
            )));
        }
        if (direction.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidLine(format!(
                "segment direction norm {} != 1",
                direction.norm()
            )));
        }
        let seg = Self {
            base,
            direction,
            t_lo,
            t_hi,
        };
        for t in [t_lo, t_hi] {
            let n = seg.point(t).norm();
            if n > radius * (1.0 + 1e-12) {
                return Err(Error::InvalidLine(format!(
                    "segment point at t = {t} has norm {n} > {radius}"
                )));
            }
        }
        Ok(seg)
    }

    /// Segment from `a` to `b`, parametrized by arc length from `a`.
    pub fn between(a: &ComplexVector, b: &ComplexVector, radius: f64) -> Result<Self> {
        let diff = b - a;
        let len = diff.norm();
        let dir = diff.normalized()?;
        Self::new(a.clone(), dir, 0.0, len, radius)
    }

    pub fn base(&self) -> &ComplexVector {
        &self.base
    }

    pub fn direction(&self) -> &ComplexVector {
        &self.direction
    }

    pub fn t_lo(&self) -> f64 {
        self.t_lo
    }

    pub fn t_hi(&self) -> f64 {
        self.t_hi
    }

    pub fn len(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn point(&self, t: f64) -> ComplexVector {
        self.base.axpy(Complex64::new(t, 0.0), &self.direction)
    }

    /// `t -> f(base + t u)`, evaluable at real `t` via [`AffineRestriction::at`].
    pub fn restrict(&self, f: &AnalyticExpr) -> Result<AffineRestriction> {
        AffineRestriction::new(f, self.base.clone(), self.direction.clone())
    }

    /// The complex line through this segment's line, in the `(x, v, s)`
    /// normalization, together with the map from `t` to the disk parameter.
    pub fn complexify(&self, s: f64) -> Result<(ComplexLine, ParamMap)> {
        if !(s > 1.0) {
            return Err(Error::InvalidLine(format!(
                "complexification radius {s} must exceed 1"
            )));
        }
        let u = &self.direction;
        // real distance from the origin to the real line
        let t_near = -self.base.real_dot(u);
        let real_dist = self.point(t_near).norm();
        if real_dist >= 1.0 {
            return Err(Error::LineMissesBall {
                distance: real_dist,
            });
        }
        // Hermitian projection: the point of the complex line nearest 0
        let offset = self.base.hermitian(u);
        let x = self.base.axpy(-offset, u);
        // clean up the residual component along u
        let residual = x.hermitian(u);
        let x = x.axpy(-residual, u);
        let line = ComplexLine::new(x, u.clone(), s)?;
        let map = ParamMap {
            offset,
            scale: line.scale(),
        };
        Ok((line, map))
    }
}

/// Affine map `t -> (t + offset) / scale` from a real segment parameter to
/// the disk parameter of its complexified line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamMap {
    pub offset: Complex64,
    pub scale: f64,
}

impl ParamMap {
    pub fn apply(&self, t: f64) -> Complex64 {
        (Complex64::new(t, 0.0) + self.offset) / self.scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::poly::MultiPoly;

    fn cv(re: &[f64]) -> ComplexVector {
        ComplexVector::from_real(re).unwrap()
    }

    #[test]
    fn linear_restriction_through_origin() {
        let line = ComplexLine::new(cv(&[0.0, 0.0]), cv(&[1.0, 0.0]), 2.0).unwrap();
        let f = line.restrict(&AnalyticExpr::coordinate(2, 0)).unwrap();
        let z = Complex64::new(0.3, -0.4);
        assert!((f.value(z).unwrap() - 2.0 * z).norm() < 1e-15);
    }

    #[test]
    fn constants_restrict_to_constants() {
        let line = ComplexLine::new(cv(&[0.0, 0.5]), cv(&[1.0, 0.0]), 2.0).unwrap();
        let f = line.restrict(&AnalyticExpr::constant(2, 3.5)).unwrap();
        for k in 0..5 {
            let z = Complex64::from_polar(0.9, k as f64);
            assert_eq!(f.value(z).unwrap(), Complex64::new(3.5, 0.0));
        }
    }

    #[test]
    fn square_restriction_off_origin() {
        // f = z1^2, x = (0, 1/2), v = e1, s = 2: F(z) = (sqrt(15)/2 z)^2
        let line = ComplexLine::new(cv(&[0.0, 0.5]), cv(&[1.0, 0.0]), 2.0).unwrap();
        let f = line
            .restrict(&AnalyticExpr::Poly(MultiPoly::monomial(2, 0, 2)))
            .unwrap();
        let c = 15f64.sqrt() / 2.0;
        for k in 0..5 {
            let z = Complex64::new(0.1 * k as f64, 0.2 - 0.05 * k as f64);
            let expect = (c * z) * (c * z);
            assert!((f.value(z).unwrap() - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn line_validation() {
        assert!(ComplexLine::new(cv(&[0.5, 0.0]), cv(&[1.0, 0.0]), 2.0).is_err());
        assert!(ComplexLine::new(cv(&[0.0, 0.0]), cv(&[2.0, 0.0]), 2.0).is_err());
        assert!(ComplexLine::new(cv(&[0.0, 2.5]), cv(&[1.0, 0.0]), 2.0).is_err());
    }

    #[test]
    fn real_segment_values() {
        let f = AnalyticExpr::coordinate(1, 0);
        let seg = RealSegment::new(cv(&[0.0]), cv(&[1.0]), -1.0, 1.0, 1.0).unwrap();
        assert_eq!(seg.restrict(&f).unwrap().at(0.5), Complex64::new(0.5, 0.0));
        let dir = ComplexVector::new(vec![Complex64::new(0.0, 1.0)]).unwrap();
        let seg = RealSegment::new(cv(&[0.0]), dir, -1.0, 1.0, 1.0).unwrap();
        assert_eq!(seg.restrict(&f).unwrap().at(0.5), Complex64::new(0.0, 0.5));
        let sq = AnalyticExpr::Poly(MultiPoly::monomial(2, 0, 2));
        let seg = RealSegment::new(cv(&[0.1, 0.0]), cv(&[0.0, 1.0]), -0.9, 0.9, 1.0).unwrap();
        let v = seg.restrict(&sq).unwrap().at(0.9);
        assert!((v - Complex64::new(0.01, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn segment_outside_ball_rejected() {
        assert!(RealSegment::new(cv(&[0.0]), cv(&[1.0]), -1.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn complexify_through_origin() {
        let seg = RealSegment::new(cv(&[0.0, 0.0]), cv(&[1.0, 0.0]), -1.0, 1.0, 1.0).unwrap();
        let (line, map) = seg.complexify(2.0).unwrap();
        assert_eq!(line.base(), &cv(&[0.0, 0.0]));
        assert_eq!(line.direction(), &cv(&[1.0, 0.0]));
        assert!((map.apply(0.6) - Complex64::new(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn complexify_offset_base() {
        let seg = RealSegment::new(cv(&[0.3, 0.0]), cv(&[0.0, 1.0]), -0.9, 0.9, 1.0).unwrap();
        let (line, _) = seg.complexify(2.0).unwrap();
        assert_eq!(line.base(), &cv(&[0.3, 0.0]));
        assert_eq!(line.direction(), &cv(&[0.0, 1.0]));
        assert!(line.base().hermitian(line.direction()).norm() < 1e-15);
    }

    #[test]
    fn complexify_rejects_far_lines() {
        let seg = RealSegment::new(cv(&[0.99, 0.0]), cv(&[0.0, 1.0]), -0.1, 0.1, 1.0).unwrap();
        assert!(seg.complexify(2.0).is_ok());
        let far = RealSegment::new(cv(&[1.5, 0.0]), cv(&[0.0, 1.0]), -0.1, 0.1, 2.0).unwrap();
        assert!(matches!(
            far.complexify(2.0),
            Err(Error::LineMissesBall { .. })
        ));
    }
}
