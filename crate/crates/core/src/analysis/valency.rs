use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, RngExt};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::holomorphic::{Holomorphic, Shifted};
use super::zeros::{count_zeros_with, ContourCache, ZeroCountConfig};
use crate::error::{invalid, Result};
use crate::function::{sample_complex_line_in, AnalyticExpr, ComplexLine, ComplexVector};
use crate::rng::stream;

/// How target values `w` are drawn when searching for the most-often taken value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValencyConfig {
    pub grid_radial: usize,
    pub grid_angular: usize,
    pub uniform_draws: usize,
    /// Jitter size relative to the spread of the image.
    pub jitter: f64,
    pub zeros: ZeroCountConfig,
}

impl Default for ValencyConfig {
    fn default() -> Self {
        Self {
            grid_radial: 32,
            grid_angular: 32,
            uniform_draws: 512,
            jitter: 1e-3,
            zeros: ZeroCountConfig::default(),
        }
    }
}

impl ValencyConfig {
    pub fn n_w_samples(&self) -> usize {
        self.grid_radial * self.grid_angular + self.uniform_draws
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskValency {
    pub value: usize,
    /// A value taken `value` times; `None` for constants.
    pub witness: Option<[f64; 2]>,
}

/// True when `F` is constant to relative precision `1e-12` on the circle.
pub(crate) fn is_constant<H: Holomorphic + ?Sized>(f: &H, radius: f64) -> bool {
    let f0 = f.value(Complex64::new(radius, 0.0));
    let mut scale = f0.norm();
    let mut osc: f64 = 0.0;
    for j in 1..64 {
        let v = f.value(Complex64::from_polar(radius, TAU * j as f64 / 64.0));
        scale = scale.max(v.norm());
        osc = osc.max((v - f0).norm());
    }
    osc <= 1e-12 * scale || scale == 0.0
}

/// Largest number of preimages in `|z| < radius` over sampled values `w`.
///
/// Values come from the image of a polar grid (each jittered) plus uniform
/// draws from the image's bounding box. The result is a lower bound on the
/// valency of `F` on the disk.
pub fn valency_on_disk<H: Holomorphic + ?Sized, R: Rng + ?Sized>(
    f: &H,
    radius: f64,
    cfg: &ValencyConfig,
    rng: &mut R,
) -> Result<DiskValency> {
    if !(radius > 0.0) {
        return Err(invalid(format!("radius {radius} must be positive")));
    }
    if is_constant(f, radius) {
        return Ok(DiskValency {
            value: 0,
            witness: None,
        });
    }
    let targets = valency_targets(f, radius, cfg, rng);
    valency_at_targets(f, radius, &targets, cfg)
}

/// The target values [`valency_on_disk`] searches over.
pub fn valency_targets<H: Holomorphic + ?Sized, R: Rng + ?Sized>(
    f: &H,
    radius: f64,
    cfg: &ValencyConfig,
    rng: &mut R,
) -> Vec<Complex64> {
    let mut image = Vec::with_capacity(cfg.grid_radial * cfg.grid_angular);
    for i in 0..cfg.grid_radial {
        let rho = radius * (i as f64 + 0.5) / cfg.grid_radial as f64;
        for j in 0..cfg.grid_angular {
            image.push(f.value(Complex64::from_polar(
                rho,
                TAU * j as f64 / cfg.grid_angular as f64,
            )));
        }
    }
    let (mut lo, mut hi) = (
        Complex64::new(f64::INFINITY, f64::INFINITY),
        Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for w in &image {
        lo = Complex64::new(lo.re.min(w.re), lo.im.min(w.im));
        hi = Complex64::new(hi.re.max(w.re), hi.im.max(w.im));
    }
    let spread = (hi - lo).norm().max(f64::MIN_POSITIVE);
    let mut targets = Vec::with_capacity(cfg.n_w_samples());
    for w in &image {
        let g: [f64; 2] = [StandardNormal.sample(rng), StandardNormal.sample(rng)];
        targets.push(w + Complex64::new(g[0], g[1]) * (cfg.jitter * spread));
    }
    for _ in 0..cfg.uniform_draws {
        let (a, b): (f64, f64) = (rng.random(), rng.random());
        targets.push(Complex64::new(
            lo.re + a * (hi.re - lo.re),
            lo.im + b * (hi.im - lo.im),
        ));
    }
    targets
}

/// Largest number of solutions of `F = w` in `|z| < radius` over the given `w`.
pub fn valency_at_targets<H: Holomorphic + ?Sized>(
    f: &H,
    radius: f64,
    targets: &[Complex64],
    cfg: &ValencyConfig,
) -> Result<DiskValency> {
    let cache = ContourCache::new(f, radius, cfg.zeros.initial_nodes)?;
    let mut best = DiskValency {
        value: 0,
        witness: None,
    };
    for &w in targets {
        let count = match cache.count_shifted(w, &cfg.zeros) {
            Some(c) => c,
            None => count_zeros_with(&Shifted { inner: f, shift: w }, radius, &cfg.zeros)?.count,
        };
        if count > best.value || best.witness.is_none() {
            best = DiskValency {
                value: count,
                witness: Some([w.re, w.im]),
            };
        }
    }
    Ok(best)
}

/// Empirical lower bound on the valency of `f` in `B_c(0, t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValencyReport {
    pub value: usize,
    pub t: f64,
    pub s: f64,
    pub n_lines: usize,
    pub n_w_samples: usize,
    pub witness: Option<LineWitness>,
    /// Always "empirical lower bound".
    pub label: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineWitness {
    pub base: Vec<[f64; 2]>,
    pub direction: Vec<[f64; 2]>,
    pub s: f64,
    pub value: Option<[f64; 2]>,
}

impl LineWitness {
    pub fn new(line: &ComplexLine, value: Option<[f64; 2]>) -> Self {
        let pairs = |v: &ComplexVector| v.iter().map(|z| [z.re, z.im]).collect();
        Self {
            base: pairs(line.base()),
            direction: pairs(line.direction()),
            s: line.s(),
            value,
        }
    }
}

/// Lines used for global estimates: the coordinate axes through the origin
/// followed by `n_random` seeded random lines with base point in
/// `B_c(0, base_radius)`.
pub fn line_family(
    dim: usize,
    base_radius: f64,
    s: f64,
    n_random: usize,
    seed: u64,
) -> Result<Vec<ComplexLine>> {
    let mut lines = Vec::with_capacity(dim + n_random);
    for j in 0..dim {
        lines.push(ComplexLine::new(
            ComplexVector::zeros(dim),
            ComplexVector::basis(dim, j),
            s,
        )?);
    }
    for i in 0..n_random {
        let mut rng = stream(seed, &[0x11AE, i as u64]);
        lines.push(sample_complex_line_in(dim, base_radius, s, &mut rng)?);
    }
    Ok(lines)
}

/// Frame radius used for valency on `B_c(0, t)` inside `B_c(0, r)`.
pub fn valency_frame(t: f64, r: f64) -> f64 {
    (t + r) / 2.0
}

/// Valency of `f` on `B_c(0, t)`, estimated over sampled complex lines.
///
/// Each line is framed with `s = (t + r) / 2`, so the parameter disk of
/// radius `t/s` covers the line's slice of `B_c(0, t)`.
pub fn valency_global(
    f: &AnalyticExpr,
    t: f64,
    r: f64,
    n_lines: usize,
    cfg: &ValencyConfig,
    seed: u64,
) -> Result<ValencyReport> {
    if !(1.0 <= t && t < r) {
        return Err(invalid(format!("need 1 <= t < r, got t = {t}, r = {r}")));
    }
    let s = valency_frame(t, r);
    let lines = line_family(f.dim(), t, s, n_lines, seed)?;
    let results: Vec<Result<DiskValency>> = lines
        .par_iter()
        .enumerate()
        .map(|(i, line)| {
            let restricted = line.restrict(f)?;
            let mut rng = stream(seed, &[0x5A11, i as u64]);
            valency_on_disk(&restricted, t / s, cfg, &mut rng)
        })
        .collect();
    let mut best: Option<(usize, DiskValency)> = None;
    for (i, r) in results.into_iter().enumerate() {
        let v = r?;
        if best.as_ref().is_none_or(|(_, b)| v.value > b.value) {
            best = Some((i, v));
        }
    }
    let (idx, v) = best.expect("line family is never empty");
    Ok(ValencyReport {
        value: v.value,
        t,
        s,
        n_lines: lines.len(),
        n_w_samples: cfg.n_w_samples(),
        witness: Some(LineWitness::new(&lines[idx], v.witness)),
        label: "empirical lower bound",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::holomorphic::FnHolomorphic;
    use crate::function::{MultiPoly, UniPoly};
    use crate::rng::from_seed;

    fn monomial(k: usize) -> UniPoly {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        UniPoly::from_real(&c)
    }

    #[test]
    fn powers_are_k_valent() {
        let cfg = ValencyConfig::default();
        for k in 1..=10 {
            let v = valency_on_disk(&monomial(k), 1.0, &cfg, &mut from_seed(k as u64)).unwrap();
            assert_eq!(v.value, k, "z^{k}");
        }
    }

    #[test]
    fn constant_is_zero_valent() {
        let f = FnHolomorphic::new(|_| Complex64::new(2.0, -1.0));
        let v = valency_on_disk(&f, 1.0, &ValencyConfig::default(), &mut from_seed(0)).unwrap();
        assert_eq!(v.value, 0);
        assert!(v.witness.is_none());
    }

    #[test]
    fn quadratic_z2_plus_z() {
        // w = -0.1: roots (-1 +- sqrt(0.6)) / 2 = -0.887, -0.113, both inside
        let f = UniPoly::from_real(&[0.0, 1.0, 1.0]);
        let shifted = f.add(&UniPoly::constant(Complex64::new(0.1, 0.0)));
        assert_eq!(
            super::super::zeros::count_zeros(&shifted, 1.0, 1024)
                .unwrap()
                .count,
            2
        );
        let v = valency_on_disk(&f, 1.0, &ValencyConfig::default(), &mut from_seed(3)).unwrap();
        assert_eq!(v.value, 2);
    }

    #[test]
    fn global_valency_examples() {
        let cfg = ValencyConfig::default();
        let lin = AnalyticExpr::coordinate(2, 0);
        assert_eq!(
            valency_global(&lin, 1.25, 2.0, 4, &cfg, 1).unwrap().value,
            1
        );
        let c = AnalyticExpr::constant(2, 3.0);
        assert_eq!(valency_global(&c, 1.25, 2.0, 4, &cfg, 1).unwrap().value, 0);
        let sq = AnalyticExpr::Poly(MultiPoly::monomial(2, 0, 2));
        let rep = valency_global(&sq, 1.25, 2.0, 4, &cfg, 1).unwrap();
        assert_eq!(rep.value, 2);
        assert_eq!(rep.label, "empirical lower bound");
    }

    #[test]
    fn rejects_bad_t() {
        let f = AnalyticExpr::coordinate(1, 0);
        assert!(valency_global(&f, 2.0, 2.0, 1, &ValencyConfig::default(), 0).is_err());
        assert!(valency_global(&f, 0.5, 2.0, 1, &ValencyConfig::default(), 0).is_err());
    }
}
