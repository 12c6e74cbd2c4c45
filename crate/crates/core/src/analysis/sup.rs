use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::holomorphic::Holomorphic;
use crate::error::{invalid, Error, Result};
use crate::numeric::golden_max;

pub const MIN_BOUNDARY_SAMPLES: usize = 64;

/// `sup log|F|` over a closed disk, read off the boundary circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskSupResult {
    pub radius: f64,
    /// `-inf` when `all_zero` is set.
    pub log_sup: f64,
    pub n_boundary_samples: usize,
    pub argmax_angle: f64,
    pub all_zero: bool,
}

/// Maximum of `log|F|` over `n` equispaced boundary points, refined by a
/// golden-section search around the best sample.
pub fn disk_sup_log<H: Holomorphic + ?Sized>(
    f: &H,
    radius: f64,
    n: usize,
) -> Result<DiskSupResult> {
    if n < MIN_BOUNDARY_SAMPLES {
        return Err(invalid(format!(
            "need at least {MIN_BOUNDARY_SAMPLES} boundary samples, got {n}"
        )));
    }
    if !(radius > 0.0) {
        return Err(invalid(format!("radius {radius} must be positive")));
    }
    let log_abs = |theta: f64| f.value(Complex64::from_polar(radius, theta)).norm().ln();
    let mut best = (0.0, f64::NEG_INFINITY);
    for j in 0..n {
        let theta = TAU * j as f64 / n as f64;
        let v = log_abs(theta);
        if v.is_nan() || v == f64::INFINITY {
            return Err(Error::Overflow {
                context: "disk supremum",
            });
        }
        if v > best.1 {
            best = (theta, v);
        }
    }
    if best.1 == f64::NEG_INFINITY {
        return Ok(DiskSupResult {
            radius,
            log_sup: f64::NEG_INFINITY,
            n_boundary_samples: n,
            argmax_angle: 0.0,
            all_zero: true,
        });
    }
    let h = TAU / n as f64;
    let refined = golden_max(
        |theta| {
            let v = log_abs(theta);
            if v.is_finite() {
                v
            } else {
                f64::NEG_INFINITY
            }
        },
        best.0 - h,
        best.0 + h,
        48,
    );
    if refined.1 > best.1 {
        best = refined;
    }
    Ok(DiskSupResult {
        radius,
        log_sup: best.1,
        n_boundary_samples: n,
        argmax_angle: best.0.rem_euclid(TAU),
        all_zero: false,
    })
}
