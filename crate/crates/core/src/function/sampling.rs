use num_complex::Complex64;
use rand::{Rng, RngExt};
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::line::{ComplexLine, RealSegment};
use super::vector::ComplexVector;
use crate::error::{invalid, Result};

/// Where sampled real segments live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentDomain {
    /// Chords of the real unit ball `B(0,1)` of `R^n`.
    RealBall,
    /// Chords of the complex unit ball `B_c(0,1)` viewed as a ball of `R^{2n}`.
    ComplexBall,
}

fn gaussian_complex<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect()
}

fn gaussian_real<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            Complex64::new(re, 0.0)
        })
        .collect()
}

fn unit_vector(mut g: Vec<Complex64>) -> ComplexVector {
    let n = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut g {
        *z /= n;
    }
    ComplexVector::from_vec_unchecked(g)
}

/// Uniform point of the complex ball `B_c(0, radius)`.
pub fn uniform_in_complex_ball<R: Rng + ?Sized>(
    dim: usize,
    radius: f64,
    rng: &mut R,
) -> ComplexVector {
    let dir = unit_vector(gaussian_complex(dim, rng));
    let u: f64 = rng.random();
    dir.scale_real(radius * u.powf(1.0 / (2 * dim) as f64))
}

/// Uniform unit vector Hermitian-orthogonal to `x`.
fn orthogonal_unit<R: Rng + ?Sized>(x: &ComplexVector, rng: &mut R) -> ComplexVector {
    let xx = x.norm_sqr();
    loop {
        let mut v = ComplexVector::from_vec_unchecked(gaussian_complex(x.dim(), rng));
        if xx > 0.0 {
            for _ in 0..2 {
                let c = v.hermitian(x) / xx;
                v = v.axpy(-c, x);
            }
        }
        if v.norm() > 1e-8 {
            return v.normalized().expect("nonzero");
        }
    }
}

/// A complex line with base point uniform in `B_c(0,1)`; see
/// [`sample_complex_line_in`].
pub fn sample_complex_line<R: Rng + ?Sized>(
    dim: usize,
    s: f64,
    rng: &mut R,
) -> Result<ComplexLine> {
    sample_complex_line_in(dim, 1.0, s, rng)
}

/// A complex line in the `(x, v, s)` parametrization with `x` uniform in
/// `B_c(0, base_radius)` and `v` uniform on the unit sphere of the Hermitian
/// complement of `x`.
///
/// In dimension one every complex line is `C` itself, whose normalized base
/// point is the origin; `x = 0` and `v` is a random unit scalar.
pub fn sample_complex_line_in<R: Rng + ?Sized>(
    dim: usize,
    base_radius: f64,
    s: f64,
    rng: &mut R,
) -> Result<ComplexLine> {
    if dim == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if !(base_radius > 0.0 && base_radius < s) {
        return Err(invalid(format!(
            "base radius {base_radius} must lie in (0, s = {s})"
        )));
    }
    let x = if dim == 1 {
        ComplexVector::zeros(1)
    } else {
        uniform_in_complex_ball(dim, base_radius, rng)
    };
    let v = orthogonal_unit(&x, rng);
    ComplexLine::new(x, v, s)
}

/// The full chord of the unit ball through a uniform interior point along a
/// uniform direction.
pub fn sample_real_segment<R: Rng + ?Sized>(
    dim: usize,
    domain: SegmentDomain,
    rng: &mut R,
) -> Result<RealSegment> {
    if dim == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let (p, u) = match domain {
        SegmentDomain::RealBall => {
            let dir = unit_vector(gaussian_real(dim, rng));
            let r: f64 = rng.random();
            let p = unit_vector(gaussian_real(dim, rng)).scale_real(r.powf(1.0 / dim as f64));
            (p, dir)
        }
        SegmentDomain::ComplexBall => {
            let p = uniform_in_complex_ball(dim, 1.0, rng);
            (p, unit_vector(gaussian_complex(dim, rng)))
        }
    };
    // |p + t u|^2 = 1
    let b = p.real_dot(&u);
    let disc = (b * b - (p.norm_sqr() - 1.0)).max(0.0).sqrt();
    // shrink by a few ulps so the endpoints stay in the closed ball
    let t_lo = (-b - disc) * (1.0 - 1e-14);
    let t_hi = (-b + disc) * (1.0 - 1e-14);
    RealSegment::new(p, u, t_lo, t_hi, 1.0)
}
