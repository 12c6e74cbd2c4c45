use super::intervals::IntervalUnion;
use crate::error::{invalid, Error, Result};
use crate::function::{AffineRestriction, AnalyticExpr, RealSegment};
use crate::numeric::{golden_max, linspace};

/// Smallest accepted number of scan points per interval.
pub const MIN_EVAL: usize = 128;

/// Local maxima of the scan refined by golden-section search.
const REFINED_MAXIMA: usize = 3;
const GOLDEN_ITERATIONS: usize = 48;

/// Max of `g` on `[lo, hi]`: `n` equispaced samples, then golden-section
/// refinement around the largest few local maxima of the scan.
pub(crate) fn scan_max<G: Fn(f64) -> f64>(g: &G, lo: f64, hi: f64, n: usize) -> Result<f64> {
    let ts: Vec<f64> = linspace(lo, hi, n).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
    if vs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow {
            context: "sup scan",
        });
    }
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| (i == 0 || vs[i] >= vs[i - 1]) && (i + 1 == n || vs[i] >= vs[i + 1]))
        .collect();
    peaks.sort_by(|&a, &b| vs[b].total_cmp(&vs[a]).then(a.cmp(&b)));
    let mut best = vs.iter().copied().fold(0.0, f64::max);
    for &i in peaks.iter().take(REFINED_MAXIMA) {
        let a = ts[i.saturating_sub(1)];
        let b = ts[(i + 1).min(n - 1)];
        let (_, m) = golden_max(g, a, b, GOLDEN_ITERATIONS);
        if m.is_finite() {
            best = best.max(m);
        }
    }
    Ok(best)
}

fn check_eval(n: usize) -> Result<()> {
    if n < MIN_EVAL {
        return Err(invalid(format!(
            "n_eval = {n} is below the minimum {MIN_EVAL}"
        )));
    }
    Ok(())
}

/// `sup |F|` over `[lo, hi]` for a restriction evaluated at real parameters.
pub(crate) fn interval_sup(f: &AffineRestriction, lo: f64, hi: f64, n: usize) -> Result<f64> {
    scan_max(&|t| f.at(t).norm(), lo, hi, n)
}

/// `sup |F|` over a union, scanning every piece with `n` points.
pub(crate) fn union_sup(f: &AffineRestriction, omega: &IntervalUnion, n: usize) -> Result<f64> {
    let mut best: f64 = 0.0;
    for &(lo, hi) in omega.pieces() {
        best = best.max(interval_sup(f, lo, hi, n)?);
    }
    Ok(best)
}

/// `max |f|` over the segment.
pub fn sup_on_segment(f: &AnalyticExpr, seg: &RealSegment, n: usize) -> Result<f64> {
    check_eval(n)?;
    interval_sup(&seg.restrict(f)?, seg.t_lo(), seg.t_hi(), n)
}

/// `max |f|` over the part of the segment with parameter in `omega`.
pub fn sup_on_subset(
    f: &AnalyticExpr,
    seg: &RealSegment,
    omega: &IntervalUnion,
    n: usize,
) -> Result<f64> {
    check_eval(n)?;
    if !omega.within(seg.t_lo(), seg.t_hi()) {
        return Err(invalid(format!(
            "subset [{}, {}] leaves the segment [{}, {}]",
            omega.lo(),
            omega.hi(),
            seg.t_lo(),
            seg.t_hi()
        )));
    }
    union_sup(&seg.restrict(f)?, omega, n)
}
