use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::holomorphic::Holomorphic;
use super::sup::disk_sup_log;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    pub coefficients: Vec<Complex64>,
    pub expansion_radius: f64,
}

impl TaylorSeries {
    /// Checks `|a_j| <= sup_{|z|=rho} |F| / rho^j`, with 10% slack.
    pub fn satisfies_cauchy_estimates(&self, log_sup: f64) -> bool {
        let rho = self.expansion_radius;
        self.coefficients
            .iter()
            .enumerate()
            .all(|(j, a)| a.norm().ln() <= log_sup - j as f64 * rho.ln() + 1.1f64.ln())
    }
}

/// `a_j = (1 / 2 pi i) \oint F(z) / z^{j+1} dz` on `|z| = radius`, for
/// `j = 0..=n`, by the trapezoid rule on `max(256, 8n)` nodes.
pub fn taylor_coefficients<H: Holomorphic + ?Sized>(
    f: &H,
    radius: f64,
    n: usize,
) -> Result<TaylorSeries> {
    if !(radius > 0.0) {
        return Err(invalid(format!(
            "expansion radius {radius} must be positive"
        )));
    }
    let nodes = 256.max(8 * n);
    let samples: Vec<(Complex64, Complex64)> = (0..nodes)
        .map(|k| {
            let w = Complex64::from_polar(1.0, TAU * k as f64 / nodes as f64);
            (w, f.value(w * radius))
        })
        .collect();
    if samples.iter().any(|(_, v)| !v.is_finite()) {
        return Err(Error::Overflow {
            context: "Taylor coefficients",
        });
    }
    let coefficients = (0..=n)
        .map(|j| {
            let sum: Complex64 = samples.iter().map(|(w, v)| v * w.powi(-(j as i32))).sum();
            sum / (nodes as f64 * radius.powi(j as i32))
        })
        .collect();
    Ok(TaylorSeries {
        coefficients,
        expansion_radius: radius,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinClassReport {
    pub member: bool,
    pub first_violation: Option<usize>,
    /// Inclusive range of indices `j > N` that were checked (empty when
    /// `lo > hi`).
    pub checked: (usize, usize),
}

/// Whether `|a_j| R^j <= c max_{i <= N} |a_i| R^i` for every available `j > N`.
pub fn bernstein_class_check(
    series: &TaylorSeries,
    n: usize,
    big_r: f64,
    c: f64,
) -> Result<BernsteinClassReport> {
    if !(big_r > 1.0) {
        return Err(invalid(format!("R = {big_r} must exceed 1")));
    }
    let a = &series.coefficients;
    if a.len() <= n {
        return Err(invalid(format!(
            "series has {} coefficients, need more than N = {n}",
            a.len()
        )));
    }
    // compare in log form to avoid overflow of R^j
    let log_scaled = |j: usize| a[j].norm().ln() + j as f64 * big_r.ln();
    let head = (0..=n).map(log_scaled).fold(f64::NEG_INFINITY, f64::max);
    let first_violation = (n + 1..a.len()).find(|&j| log_scaled(j) > c.ln() + head);
    Ok(BernsteinClassReport {
        member: first_violation.is_none(),
        first_violation,
        checked: (n + 1, a.len() - 1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthCheck {
    pub holds: bool,
    /// `log sup |F|` over the disk of radius `(1 + R)/2`.
    pub log_lhs: f64,
    /// `(m + M) log a + log sup |F|` over the unit disk.
    pub log_rhs: f64,
}

/// `sup_{D_{(1+R)/2}} |F| <= a^{m+M} sup_{D_1} |F|`, compared in logs with an
/// absolute tolerance of `1e-9`.
pub fn growth_bound_check<H: Holomorphic + ?Sized>(
    f: &H,
    big_r: f64,
    m: u32,
    big_m: u32,
    a: f64,
) -> Result<GrowthCheck> {
    if !(big_r > 1.0 && a > 1.0) {
        return Err(invalid(format!(
            "need R > 1 and a > 1, got R = {big_r}, a = {a}"
        )));
    }
    let outer = disk_sup_log(f, (1.0 + big_r) / 2.0, 512)?;
    let inner = disk_sup_log(f, 1.0, 512)?;
    let log_rhs = f64::from(m + big_m) * a.ln() + inner.log_sup;
    let holds = outer.all_zero || outer.log_sup <= log_rhs + 1e-9;
    Ok(GrowthCheck {
        holds,
        log_lhs: outer.log_sup,
        log_rhs,
    })
}
