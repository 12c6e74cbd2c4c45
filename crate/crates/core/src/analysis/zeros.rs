use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::holomorphic::{value_and_derivative, Holomorphic};
use crate::error::{invalid, Error, Result};

/// Winding number of `F` around a circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroCount {
    /// `(1 / 2 pi i) \oint F'/F`, real part.
    pub raw_winding: f64,
    pub count: usize,
    pub contour_radius: f64,
    pub n_quadrature: usize,
}

/// Tuning for [`count_zeros_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCountConfig {
    pub initial_nodes: usize,
    pub max_nodes: usize,
    /// Accepted distance of the raw winding from an integer.
    pub tolerance: f64,
    /// Zero-on-contour suspicion: `min|F| < threshold * max|F|`.
    pub contour_threshold: f64,
    /// Relative radius perturbation step; attempts use `+-1, +-2, ...` steps.
    pub perturb_step: f64,
    pub max_perturbations: usize,
}

impl Default for ZeroCountConfig {
    fn default() -> Self {
        Self {
            initial_nodes: 1024,
            max_nodes: 1 << 20,
            tolerance: 1e-6,
            contour_threshold: 1e-9,
            perturb_step: 1e-3,
            max_perturbations: 5,
        }
    }
}

/// Relative radius offsets tried in order: `0, +s, -s, +2s, -2s, ...`.
fn perturbation_schedule(cfg: &ZeroCountConfig) -> impl Iterator<Item = f64> + '_ {
    std::iter::once(0.0).chain((0..cfg.max_perturbations).map(move |i| {
        let k = (i / 2 + 1) as f64;
        if i % 2 == 0 {
            k * cfg.perturb_step
        } else {
            -k * cfg.perturb_step
        }
    }))
}

enum Attempt {
    Converged(ZeroCount),
    ZeroSuspected,
    Diverged(f64, usize),
}

/// Number of zeros of `F` inside `|z| < radius`, by the argument principle.
pub fn count_zeros<H: Holomorphic + ?Sized>(
    f: &H,
    radius: f64,
    n_quadrature: usize,
) -> Result<ZeroCount> {
    count_zeros_with(
        f,
        radius,
        &ZeroCountConfig {
            initial_nodes: n_quadrature,
            ..ZeroCountConfig::default()
        },
    )
}

pub fn count_zeros_with<H: Holomorphic + ?Sized>(
    f: &H,
    radius: f64,
    cfg: &ZeroCountConfig,
) -> Result<ZeroCount> {
    if !(radius > 0.0) {
        return Err(invalid(format!("radius {radius} must be positive")));
    }
    if cfg.initial_nodes < 8 {
        return Err(invalid("need at least 8 quadrature nodes"));
    }
    let mut last_divergence = None;
    for delta in perturbation_schedule(cfg) {
        let rho = radius * (1.0 + delta);
        match attempt(f, rho, cfg)? {
            Attempt::Converged(z) => return Ok(z),
            Attempt::ZeroSuspected => {}
            Attempt::Diverged(res, n) => last_divergence = Some((res, n)),
        }
    }
    match last_divergence {
        Some((residual, nodes)) => Err(Error::QuadratureDiverged { residual, nodes }),
        None => Err(Error::ZeroOnContour {
            radius,
            attempts: cfg.max_perturbations,
        }),
    }
}

fn attempt<H: Holomorphic + ?Sized>(f: &H, rho: f64, cfg: &ZeroCountConfig) -> Result<Attempt> {
    let h = 1e-5 * rho;
    let mut n = cfg.initial_nodes;
    loop {
        let mut min_abs = f64::INFINITY;
        let mut max_abs: f64 = 0.0;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let w = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
            let z = w * rho;
            let (v, d) = value_and_derivative(f, z, h);
            if !v.is_finite() || !d.is_finite() {
                return Err(Error::Overflow {
                    context: "contour integral",
                });
            }
            let a = v.norm();
            min_abs = min_abs.min(a);
            max_abs = max_abs.max(a);
            acc += z * d / v;
        }
        if max_abs == 0.0 {
            return Err(Error::IdenticallyZero);
        }
        if min_abs < cfg.contour_threshold * max_abs {
            return Ok(Attempt::ZeroSuspected);
        }
        let raw = acc / n as f64;
        let count = raw.re.round();
        let residual = (raw - Complex64::new(count, 0.0)).norm();
        if residual < cfg.tolerance && count >= 0.0 {
            return Ok(Attempt::Converged(ZeroCount {
                raw_winding: raw.re,
                count: count as usize,
                contour_radius: rho,
                n_quadrature: n,
            }));
        }
        if n * 2 > cfg.max_nodes {
            return Ok(Attempt::Diverged(residual, n));
        }
        n *= 2;
    }
}

/// `F` and `F'` sampled once on a circle, reused to count zeros of `F - w`
/// for many shifts `w`.
pub(crate) struct ContourCache {
    nodes: Vec<Complex64>,
    values: Vec<Complex64>,
    derivs: Vec<Complex64>,
}

impl ContourCache {
    pub fn new<H: Holomorphic + ?Sized>(f: &H, radius: f64, n: usize) -> Result<Self> {
        let h = 1e-5 * radius;
        let mut nodes = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut derivs = Vec::with_capacity(n);
        for j in 0..n {
            let z = Complex64::from_polar(radius, TAU * j as f64 / n as f64);
            let (v, d) = value_and_derivative(f, z, h);
            if !v.is_finite() || !d.is_finite() {
                return Err(Error::Overflow {
                    context: "contour samples",
                });
            }
            nodes.push(z);
            values.push(v);
            derivs.push(d);
        }
        Ok(Self {
            nodes,
            values,
            derivs,
        })
    }

    /// Zeros of `F - w`, or `None` when the cached nodes cannot settle it.
    pub fn count_shifted(&self, w: Complex64, cfg: &ZeroCountConfig) -> Option<usize> {
        let mut min_abs = f64::INFINITY;
        let mut max_abs: f64 = 0.0;
        let mut acc = Complex64::new(0.0, 0.0);
        for ((z, v), d) in self.nodes.iter().zip(&self.values).zip(&self.derivs) {
            let vs = v - w;
            let a = vs.norm();
            min_abs = min_abs.min(a);
            max_abs = max_abs.max(a);
            acc += z * d / vs;
        }
        if max_abs == 0.0 || min_abs < cfg.contour_threshold * max_abs {
            return None;
        }
        let raw = acc / self.nodes.len() as f64;
        let count = raw.re.round();
        let residual = (raw - Complex64::new(count, 0.0)).norm();
        (residual < cfg.tolerance && count >= 0.0).then_some(count as usize)
    }
}
