use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, RngExt};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::degree::{empirical_chebyshev_degree, DegreeConfig};
use super::report::{inputs, VerificationReport};
use super::structural::Calibration;
use crate::analysis::{
    count_zeros_with, is_constant, line_family, ContourCache, Holomorphic, Shifted, ZeroCountConfig,
};
use crate::bounds::{quasipoly_degree_bound, quasipoly_zero_bound, DegreeBound};
use crate::error::{invalid, Result};
use crate::function::{AnalyticExpr, ComplexVector, LinearFunctional, MultiPoly, QuasiPolynomial};
use crate::rng::{derive_seed, stream};

/// Radius of the parameter disk and of the line frame.
const DISK: f64 = 2.0;
const CONTOUR_NODES: usize = 2048;

/// A random quasipolynomial with `1..=max_terms` terms, polynomial degrees
/// up to `max_deg` and `|f_i| <= max_norm`. Coefficients are complex Gaussian.
pub fn random_quasipolynomial<R: Rng + ?Sized>(
    dim: usize,
    max_terms: usize,
    max_deg: u32,
    max_norm: f64,
    rng: &mut R,
) -> Result<QuasiPolynomial> {
    if dim == 0 || max_terms == 0 || !(max_norm >= 0.0) {
        return Err(invalid(
            "need dim >= 1, at least one term and max_norm >= 0",
        ));
    }
    let gauss = |rng: &mut R| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    };
    let k = rng.random_range(1..=max_terms);
    let mut terms = Vec::with_capacity(k);
    for _ in 0..k {
        let deg = rng.random_range(0..=max_deg);
        let mut coeffs = Vec::new();
        for_each_exponent(dim, deg, &mut |e| coeffs.push(e.to_vec()));
        let p = MultiPoly::new(dim, coeffs.into_iter().map(|e| (e, gauss(rng))))?;
        let p = if p.is_zero() {
            MultiPoly::constant(dim, Complex64::new(1.0, 0.0))
        } else {
            p
        };
        let dir: Vec<Complex64> = (0..dim).map(|_| gauss(rng)).collect();
        let len = dir
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(1e-300);
        let norm = max_norm * rng.random::<f64>();
        let f = ComplexVector::new(dir.into_iter().map(|z| z * (norm / len)).collect())?;
        terms.push((p, LinearFunctional::new(f)));
    }
    QuasiPolynomial::new(terms)
}

/// Calls `visit` for each exponent of total degree at most `deg`.
fn for_each_exponent(dim: usize, deg: u32, visit: &mut dyn FnMut(&[u32])) {
    fn rec(e: &mut Vec<u32>, j: usize, left: u32, visit: &mut dyn FnMut(&[u32])) {
        if j == e.len() {
            visit(e);
            return;
        }
        for a in 0..=left {
            e[j] = a;
            rec(e, j + 1, left - a, visit);
        }
        e[j] = 0;
    }
    let mut e = vec![0; dim];
    rec(&mut e, 0, deg, visit);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiZeroStats {
    pub max_count: usize,
    pub n_counts: usize,
    /// Shifts whose count could not be settled (zero on the contour).
    pub n_unresolved: usize,
    pub n_constant_lines: usize,
    pub bound: DegreeBound,
}

/// Zeros of `F + c` in `|z| < 2` for `F` the restriction of `q` to
/// `y + v z sqrt(4 - |y|^2)`, `y` in `B_c(0,1)`.
///
/// Lines on which `F` is constant are skipped.
///
/// Shifts alternate between `c = -F(z0)` for uniform `z0` in the disk, which
/// forces at least one zero, and perturbations of such values.
pub fn quasipoly_zero_counts(
    q: &QuasiPolynomial,
    n_lines: usize,
    n_c: usize,
    seed: u64,
) -> Result<QuasiZeroStats> {
    let k = u32::try_from(q.n_terms()).map_err(|_| invalid("too many terms"))?;
    let bound = quasipoly_zero_bound(k, q.degree(), q.spectrum_norm())?;
    let f = AnalyticExpr::Quasi(q.clone());
    let lines = line_family(q.dim(), 1.0, DISK, n_lines, seed)?;
    let zero_cfg = ZeroCountConfig::default();
    let per_line: Vec<Result<Option<(usize, usize, usize)>>> = lines
        .par_iter()
        .enumerate()
        .map(|(i, line)| {
            let restricted = line.restrict(&f)?;
            if is_constant(&restricted, DISK) {
                // F + c has no zeros unless it vanishes identically
                return Ok(None);
            }
            let cache = ContourCache::new(&restricted, DISK, CONTOUR_NODES)?;
            let mut rng = stream(seed, &[0x9A, i as u64]);
            let (mut max, mut n, mut unresolved) = (0, 0, 0);
            for j in 0..n_c {
                let z0 = Complex64::from_polar(
                    DISK * rng.random::<f64>().sqrt(),
                    TAU * rng.random::<f64>(),
                );
                let v = Holomorphic::value(&restricted, z0);
                let w = if j % 2 == 0 {
                    v
                } else {
                    let g = Complex64::new(
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                    );
                    v + g * (0.1 * v.norm().max(1e-3))
                };
                // zeros of F + c with c = -w are zeros of F - w
                let count = match cache.count_shifted(w, &zero_cfg) {
                    Some(c) => Some(c),
                    None => count_zeros_with(
                        &Shifted {
                            inner: &restricted,
                            shift: w,
                        },
                        DISK,
                        &zero_cfg,
                    )
                    .ok()
                    .map(|z| z.count),
                };
                match count {
                    Some(c) => {
                        max = max.max(c);
                        n += 1;
                    }
                    None => unresolved += 1,
                }
            }
            Ok(Some((max, n, unresolved)))
        })
        .collect();
    let mut stats = QuasiZeroStats {
        max_count: 0,
        n_counts: 0,
        n_unresolved: 0,
        n_constant_lines: 0,
        bound,
    };
    for r in per_line {
        let Some((m, n, u)) = r? else {
            stats.n_constant_lines += 1;
            continue;
        };
        stats.max_count = stats.max_count.max(m);
        stats.n_counts += n;
        stats.n_unresolved += u;
    }
    Ok(stats)
}

/// Zero-count check against the fine bound, plus `d_emp(q, 2)` against
/// `c (sqrt(k+1) M + m)` when a calibration is given.
pub fn quasipoly_verification(
    q: &QuasiPolynomial,
    n_lines: usize,
    n_c: usize,
    calib: Option<&Calibration>,
    cfg: &DegreeConfig,
    slack: f64,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let stats = quasipoly_zero_counts(q, n_lines, n_c, derive_seed(seed, &[1]))?;
    let b = stats.bound;
    let mut zeros = VerificationReport::compare(
        "quasipoly.zeros",
        seed,
        inputs([
            ("k", f64::from(b.k)),
            ("m", f64::from(b.m)),
            ("M", b.spectrum_norm),
            ("counts", stats.n_counts as f64),
            ("unresolved", stats.n_unresolved as f64),
            ("constant_lines", stats.n_constant_lines as f64),
        ]),
        stats.max_count as f64,
        b.fine,
        0.0,
    );
    if stats.n_unresolved > 0 {
        zeros = zeros.with_note(format!(
            "{} shifts with a zero on the contour skipped",
            stats.n_unresolved
        ));
    }
    let mut reports = vec![zeros];
    if let Some(cal) = calib {
        let e = empirical_chebyshev_degree(
            &AnalyticExpr::Quasi(q.clone()),
            DISK,
            cfg,
            derive_seed(seed, &[2]),
        )?;
        let rhs = quasipoly_degree_bound(b.k, b.m, b.spectrum_norm, cal.c_degree)?;
        reports.push(VerificationReport::compare(
            "quasipoly.degree",
            seed,
            inputs([
                ("c", cal.c_degree),
                ("k", f64::from(b.k)),
                ("m", f64::from(b.m)),
                ("M", b.spectrum_norm),
            ]),
            e.d_emp,
            rhs,
            slack,
        ));
    }
    Ok(reports)
}
