use rayon::prelude::*;
use serde::Serialize;

use super::sup::disk_sup_log;
use super::valency::{line_family, LineWitness};
use crate::error::{invalid, Result};
use crate::function::AnalyticExpr;

const BOUNDARY_SAMPLES: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinIndexReport {
    pub value: f64,
    pub s: f64,
    pub t: f64,
    pub r: f64,
    pub n_lines: usize,
    /// Lines on which the restriction vanished identically.
    pub n_skipped: usize,
    pub witness: Option<LineWitness>,
}

/// Estimate of `sup_{x,v} [M(x,v,s,t) - M(x,v,s,1)]` where `M` is the log-sup
/// of the line restriction over the disk of radius `t/s` (resp. `1/s`).
///
/// The coordinate axes through the origin are always included, then
/// `n_lines` random lines with base point in `B_c(0,1)`.
pub fn bernstein_index(
    f: &AnalyticExpr,
    s: f64,
    t: f64,
    r: f64,
    n_lines: usize,
    seed: u64,
) -> Result<BernsteinIndexReport> {
    if !(1.0 < t && t < s && s < r) {
        return Err(invalid(format!(
            "need 1 < t < s < r, got s = {s}, t = {t}, r = {r}"
        )));
    }
    let lines = line_family(f.dim(), 1.0, s, n_lines, seed)?;
    let diffs: Vec<Result<Option<f64>>> = lines
        .par_iter()
        .map(|line| {
            let restricted = line.restrict(f)?;
            let outer = disk_sup_log(&restricted, t / s, BOUNDARY_SAMPLES)?;
            let inner = disk_sup_log(&restricted, 1.0 / s, BOUNDARY_SAMPLES)?;
            if outer.all_zero || inner.all_zero {
                return Ok(None);
            }
            Ok(Some(outer.log_sup - inner.log_sup))
        })
        .collect();
    let mut best: Option<(usize, f64)> = None;
    let mut skipped = 0;
    for (i, d) in diffs.into_iter().enumerate() {
        match d? {
            None => skipped += 1,
            Some(d) => {
                if best.is_none_or(|(_, b)| d > b) {
                    best = Some((i, d));
                }
            }
        }
    }
    Ok(BernsteinIndexReport {
        value: best.map_or(0.0, |(_, d)| d.max(0.0)),
        s,
        t,
        r,
        n_lines: lines.len(),
        n_skipped: skipped,
        witness: best.map(|(i, _)| LineWitness::new(&lines[i], None)),
    })
}
