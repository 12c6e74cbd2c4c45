use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::degree::{empirical_chebyshev_degree, DegreeConfig};
use super::report::Table;
use crate::error::{invalid, Result};
use crate::function::{AnalyticExpr, ComplexVector, MultiPoly};
use crate::rng::stream;

fn sphere_point(dim: usize, r: f64, rng: &mut crate::rng::SeededRng) -> ComplexVector {
    let g: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let len = g
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1e-300);
    ComplexVector::new(g.into_iter().map(|z| z * (r / len)).collect()).expect("finite sphere point")
}

/// `sup |f|` over `B_c(0, r)`, estimated on the sphere `|z| = r` (maximum
/// modulus) by sampling and a shrinking random local search.
pub fn complex_ball_sup(f: &AnalyticExpr, r: f64, n_samples: usize, seed: u64) -> Result<f64> {
    if !(r > 0.0) || n_samples == 0 {
        return Err(invalid("need r > 0 and at least one sample"));
    }
    let dim = f.dim();
    let mut rng = stream(seed, &[0xB5]);
    let mut pts: Vec<(f64, ComplexVector)> = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let z = sphere_point(dim, r, &mut rng);
        pts.push((f.evaluate(&z)?.norm(), z));
    }
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = pts[0].0;
    for (v0, z0) in pts.into_iter().take(4) {
        let (mut v, mut z) = (v0, z0);
        let mut step = 0.1 * r;
        let mut misses = 0;
        while step > 1e-12 * r {
            let d = sphere_point(dim, step, &mut rng);
            let y = &z + &d;
            let y = y.scale_real(r / y.norm());
            let fy = f.evaluate(&y)?.norm();
            if fy > v {
                v = fy;
                z = y;
                misses = 0;
            } else {
                misses += 1;
                if misses >= 12 {
                    step /= 2.0;
                    misses = 0;
                }
            }
        }
        best = best.max(v);
    }
    Ok(best)
}

/// `sum_{j <= k} phi_j f^j` as a polynomial.
pub fn compose_truncation(series: &[Complex64], k: usize, f: &MultiPoly) -> MultiPoly {
    let dim = f.dim();
    let top = k.min(series.len().saturating_sub(1));
    let mut acc = MultiPoly::constant(dim, series.get(top).copied().unwrap_or_default());
    for j in (0..top).rev() {
        acc = acc.mul(f).add(&MultiPoly::constant(dim, series[j]));
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositionRow {
    pub k: usize,
    pub d_emp: f64,
    /// `k deg f`, the exponent of the classical polynomial bounds.
    pub classical: f64,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionTable {
    pub rows: Vec<CompositionRow>,
    pub sup_f: f64,
    pub r: f64,
    pub seed: u64,
}

impl CompositionTable {
    /// `d_emp` at the largest `k` over `d_emp` at the smallest.
    pub fn growth_factor(&self) -> f64 {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) if a.d_emp > 0.0 => b.d_emp / a.d_emp,
            _ => f64::INFINITY,
        }
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new("composition", &["k", "d_emp", "classical", "degree"]);
        for r in &self.rows {
            t.push(vec![r.k as f64, r.d_emp, r.classical, f64::from(r.degree)]);
        }
        t
    }
}

/// Samples on the sphere used for the `sup |f| < 1` precondition.
const SPHERE_SAMPLES: usize = 4096;

/// Empirical degree of the truncations `h_k o f` against `k deg f`.
///
/// Requires `sup_{B_c(0,r)} |f| < 1`, checked by sampling with refinement
/// against `1 - 1e-9`.
pub fn composition_experiment(
    f: &MultiPoly,
    phi_series: &[Complex64],
    k_list: &[usize],
    r: f64,
    cfg: &DegreeConfig,
    seed: u64,
) -> Result<CompositionTable> {
    if !(r > 1.0) {
        return Err(invalid(format!("r = {r} must exceed 1")));
    }
    if k_list.is_empty() || k_list.iter().any(|&k| k == 0 || k >= phi_series.len()) {
        return Err(invalid("k values must lie in 1..series length"));
    }
    let fe = AnalyticExpr::Poly(f.clone());
    let sup_f = complex_ball_sup(&fe, r, SPHERE_SAMPLES, seed)?;
    if !(sup_f < 1.0 - 1e-9) {
        return Err(invalid(format!(
            "composition needs sup |f| < 1 on B_c(0, {r}); measured {sup_f}"
        )));
    }
    let mut rows = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let h = compose_truncation(phi_series, k, f);
        let degree = h.degree();
        let e = empirical_chebyshev_degree(&AnalyticExpr::Poly(h), r, cfg, seed)?;
        rows.push(CompositionRow {
            k,
            d_emp: e.d_emp,
            classical: (k as u32 * f.degree()) as f64,
            degree,
        });
    }
    Ok(CompositionTable {
        rows,
        sup_f,
        r,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::exp_series;

    #[test]
    fn ball_sup_of_coordinate() {
        let f = AnalyticExpr::coordinate(2, 0);
        let s = complex_ball_sup(&f, 1.5, 512, 0).unwrap();
        assert!(s <= 1.5 + 1e-12 && s > 1.5 - 1e-6, "{s}");
    }

    #[test]
    fn truncation_degree_is_multiplicative() {
        let f = MultiPoly::variable(2, 0)
            .add(&MultiPoly::variable(2, 1).mul(&MultiPoly::variable(2, 1)));
        let s = exp_series(20);
        for k in [1, 2, 5] {
            assert_eq!(compose_truncation(&s, k, &f).degree(), 2 * k as u32);
        }
    }

    #[test]
    fn identity_series_reproduces_f() {
        let f = MultiPoly::variable(2, 0).scale(0.5.into());
        let id = vec![0.0.into(), 1.0.into(), 0.0.into()];
        let cfg = DegreeConfig {
            n_segments: 4,
            n_subsets: 16,
            ..Default::default()
        };
        let t = composition_experiment(&f, &id, &[1], 1.5, &cfg, 2).unwrap();
        let direct = empirical_chebyshev_degree(&AnalyticExpr::Poly(f), 1.5, &cfg, 2).unwrap();
        assert_eq!(t.rows[0].d_emp, direct.d_emp);
    }

    #[test]
    fn image_precondition() {
        let f = MultiPoly::variable(1, 0).scale(0.5.into());
        let cfg = DegreeConfig::default();
        // sup |z/2| on B_c(0, 2) is 1
        assert!(composition_experiment(&f, &exp_series(8), &[2], 2.0, &cfg, 0).is_err());
    }
}
