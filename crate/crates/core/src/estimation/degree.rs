use std::collections::BTreeMap;

use rand::RngExt;
use rayon::prelude::*;
use serde::Serialize;

use super::intervals::IntervalUnion;
use super::report::VerificationReport;
use super::sup::{interval_sup, union_sup, MIN_EVAL};
use crate::error::{invalid, Error, Result};
use crate::function::{
    sample_real_segment, AffineRestriction, AnalyticExpr, ComplexVector, RealSegment, SegmentDomain,
};
use crate::rng::stream;

const TAG_SEGMENT: u64 = 0x5E6;
const TAG_SUBSET: u64 = 0x5B5;
const MAX_PIECES: usize = 5;
/// Intervals shorter than this fraction of their segment are redrawn.
const MIN_INTERVAL_FRACTION: f64 = 1e-3;
/// Subsets below this fraction of `|I|` are never sampled.
const MIN_SUBSET_RATIO: f64 = 1e-4;

/// Sampling plan for `(segment, I, omega)` configurations.
///
/// Configuration `(i, j)` draws its segment from stream `i` and its `I`,
/// `omega` from stream `(i, j)`, so enlarging either count only adds
/// configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeConfig {
    pub n_segments: usize,
    pub n_subsets: usize,
    /// Lower limit of `|omega| / |I|`; the ratio is log-uniform above it.
    pub min_ratio: f64,
    pub n_eval: usize,
    pub domain: SegmentDomain,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        Self {
            n_segments: 20,
            n_subsets: 50,
            min_ratio: 0.05,
            n_eval: MIN_EVAL,
            domain: SegmentDomain::ComplexBall,
        }
    }
}

impl DegreeConfig {
    pub fn n_configs(&self) -> usize {
        self.n_segments * self.n_subsets
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_segments == 0 || self.n_subsets == 0 {
            return Err(invalid("need at least one segment and one subset"));
        }
        if !(self.min_ratio >= MIN_SUBSET_RATIO && self.min_ratio < 1.0) {
            return Err(invalid(format!(
                "min_ratio = {} must lie in [{MIN_SUBSET_RATIO}, 1)",
                self.min_ratio
            )));
        }
        if self.n_eval < MIN_EVAL {
            return Err(invalid(format!(
                "n_eval = {} is below {MIN_EVAL}",
                self.n_eval
            )));
        }
        Ok(())
    }
}

/// One sampled configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RemezConfig {
    pub segment: RealSegment,
    pub interval: (f64, f64),
    pub omega: IntervalUnion,
}

impl RemezConfig {
    /// `ln(4 |I| / |omega|)`.
    pub fn log_measure_ratio(&self) -> f64 {
        (4.0 * (self.interval.1 - self.interval.0) / self.omega.measure()).ln()
    }
}

pub(crate) fn segment_for(
    dim: usize,
    cfg: &DegreeConfig,
    seed: u64,
    i: usize,
) -> Result<RealSegment> {
    sample_real_segment(dim, cfg.domain, &mut stream(seed, &[TAG_SEGMENT, i as u64]))
}

pub(crate) fn subset_for(
    seg: &RealSegment,
    cfg: &DegreeConfig,
    seed: u64,
    i: usize,
    j: usize,
) -> Result<RemezConfig> {
    let mut rng = stream(seed, &[TAG_SUBSET, i as u64, j as u64]);
    let (t0, t1) = (seg.t_lo(), seg.t_hi());
    let (lo, hi) = loop {
        let a = t0 + rng.random::<f64>() * (t1 - t0);
        let b = t0 + rng.random::<f64>() * (t1 - t0);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if hi - lo >= MIN_INTERVAL_FRACTION * (t1 - t0) {
            break (lo, hi);
        }
    };
    let ratio = cfg.min_ratio.powf(rng.random::<f64>());
    let n_pieces = rng.random_range(1..=MAX_PIECES);
    let omega = IntervalUnion::random_subset(lo, hi, ratio, n_pieces, &mut rng)?;
    Ok(RemezConfig {
        segment: seg.clone(),
        interval: (lo, hi),
        omega,
    })
}

/// The configuration at index `(i, j)` of the sampling plan.
pub fn remez_config(
    dim: usize,
    cfg: &DegreeConfig,
    seed: u64,
    i: usize,
    j: usize,
) -> Result<RemezConfig> {
    subset_for(&segment_for(dim, cfg, seed, i)?, cfg, seed, i, j)
}

/// Measured sides of the Remez inequality for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemezTerm {
    pub log_sup_interval: f64,
    pub log_sup_omega: f64,
    pub log_measure_ratio: f64,
}

impl RemezTerm {
    /// `log(sup_I / sup_omega) / log(4 |I| / |omega|)`.
    pub fn exponent(&self) -> f64 {
        (self.log_sup_interval - self.log_sup_omega) / self.log_measure_ratio
    }

    /// Smallest `d` with `sup_I <= (4|I|/|omega|)^d sup_omega (1 + slack)`.
    pub fn needed_exponent(&self, slack: f64) -> f64 {
        (self.log_sup_interval - self.log_sup_omega - slack.ln_1p()) / self.log_measure_ratio
    }
}

fn measure_with(
    f: &AffineRestriction,
    c: &RemezConfig,
    n_eval: usize,
) -> Result<Option<RemezTerm>> {
    let sup_i = interval_sup(f, c.interval.0, c.interval.1, n_eval)?;
    let sup_o = union_sup(f, &c.omega, n_eval)?;
    if !(sup_o > 0.0) {
        return Ok(None);
    }
    Ok(Some(RemezTerm {
        log_sup_interval: sup_i.ln(),
        log_sup_omega: sup_o.ln(),
        log_measure_ratio: c.log_measure_ratio(),
    }))
}

/// Remez term of `f` for one configuration; `None` when `sup_omega |f| = 0`.
pub fn remez_term(f: &AnalyticExpr, c: &RemezConfig, n_eval: usize) -> Result<Option<RemezTerm>> {
    if n_eval < MIN_EVAL {
        return Err(invalid(format!("n_eval = {n_eval} is below {MIN_EVAL}")));
    }
    if !(c.omega.within(c.interval.0, c.interval.1)
        && c.segment.t_lo() <= c.interval.0
        && c.interval.1 <= c.segment.t_hi())
    {
        return Err(invalid("need omega inside I inside the segment"));
    }
    measure_with(&c.segment.restrict(f)?, c, n_eval)
}

/// Terms for every configuration of the plan, in index order.
pub(crate) fn measure_plan(
    f: &AnalyticExpr,
    cfg: &DegreeConfig,
    seed: u64,
) -> Result<Vec<Option<RemezTerm>>> {
    cfg.validate()?;
    let dim = f.dim();
    let per_segment: Vec<Result<Vec<Option<RemezTerm>>>> = (0..cfg.n_segments)
        .into_par_iter()
        .map(|i| {
            let seg = segment_for(dim, cfg, seed, i)?;
            let restricted = seg.restrict(f)?;
            (0..cfg.n_subsets)
                .into_par_iter()
                .map(|j| measure_with(&restricted, &subset_for(&seg, cfg, seed, i, j)?, cfg.n_eval))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(cfg.n_configs());
    for r in per_segment {
        out.extend(r?);
    }
    Ok(out)
}

/// The configuration that attained an estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigWitness {
    pub segment_index: usize,
    pub subset_index: usize,
    pub base: Vec<[f64; 2]>,
    pub direction: Vec<[f64; 2]>,
    pub segment: (f64, f64),
    pub interval: (f64, f64),
    pub omega: Vec<(f64, f64)>,
}

impl ConfigWitness {
    fn new(c: &RemezConfig, i: usize, j: usize) -> Self {
        let pairs = |v: &ComplexVector| v.iter().map(|z| [z.re, z.im]).collect();
        Self {
            segment_index: i,
            subset_index: j,
            base: pairs(c.segment.base()),
            direction: pairs(c.segment.direction()),
            segment: (c.segment.t_lo(), c.segment.t_hi()),
            interval: c.interval,
            omega: c.omega.pieces().to_vec(),
        }
    }
}

/// Empirical lower bound on the Chebyshev degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDegree {
    pub d_emp: f64,
    pub r: f64,
    pub n_configs: usize,
    /// Configurations with `sup_omega |f| = 0`.
    pub n_skipped: usize,
    pub witness: ConfigWitness,
    /// `log(sup_I |f| / sup_omega |f|)` at the witness.
    pub ratio_log: f64,
    /// `log(4 |I| / |omega|)` at the witness.
    pub bound_log: f64,
}

fn argmax_by<F: Fn(&RemezTerm) -> f64>(
    terms: &[Option<RemezTerm>],
    key: F,
) -> Option<(usize, RemezTerm)> {
    let mut best: Option<(usize, RemezTerm)> = None;
    for (idx, t) in terms.iter().enumerate() {
        if let Some(t) = t {
            if best.as_ref().is_none_or(|(_, b)| key(t) > key(b)) {
                best = Some((idx, *t));
            }
        }
    }
    best
}

/// `max log(sup_I|f| / sup_omega|f|) / log(4|I|/|omega|)` over the sampled
/// configurations, floored at 0. Always a lower bound on `d_f(r)`.
pub fn empirical_chebyshev_degree(
    f: &AnalyticExpr,
    r: f64,
    cfg: &DegreeConfig,
    seed: u64,
) -> Result<EmpiricalDegree> {
    if !(r > 1.0) {
        return Err(invalid(format!("r = {r} must exceed 1")));
    }
    let terms = measure_plan(f, cfg, seed)?;
    let n_skipped = terms.iter().filter(|t| t.is_none()).count();
    let Some((idx, best)) = argmax_by(&terms, RemezTerm::exponent) else {
        return Err(Error::Degenerate(
            "sup over omega vanished on every configuration; f may be identically zero".into(),
        ));
    };
    let (i, j) = (idx / cfg.n_subsets, idx % cfg.n_subsets);
    let c = remez_config(f.dim(), cfg, seed, i, j)?;
    Ok(EmpiricalDegree {
        d_emp: best.exponent().max(0.0),
        r,
        n_configs: terms.len(),
        n_skipped,
        witness: ConfigWitness::new(&c, i, j),
        ratio_log: best.log_sup_interval - best.log_sup_omega,
        bound_log: best.log_measure_ratio,
    })
}

/// Checks `sup_I|f| <= (4|I|/|omega|)^d sup_omega|f| (1 + slack)` on every
/// configuration of the plan and reports the worst one.
///
/// The verdict is taken in exponent form (`needed_exponent <= d`), the same
/// arithmetic as [`empirical_chebyshev_degree`], so `d = d_emp` passes with
/// zero slack under the same seed.
pub fn verify_remez_1d(
    f: &AnalyticExpr,
    d: f64,
    cfg: &DegreeConfig,
    slack: f64,
    seed: u64,
) -> Result<VerificationReport> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(invalid(format!("exponent d = {d} must be finite and >= 0")));
    }
    if !(slack >= 0.0) {
        return Err(invalid(format!("slack = {slack} must be >= 0")));
    }
    let terms = measure_plan(f, cfg, seed)?;
    let checked = terms.iter().filter(|t| t.is_some()).count();
    let worst = argmax_by(&terms, |t| t.needed_exponent(slack));
    let mut inputs = BTreeMap::from([
        ("d".to_string(), d),
        ("n_configs".to_string(), terms.len() as f64),
        ("n_checked".to_string(), checked as f64),
        ("min_ratio".to_string(), cfg.min_ratio),
        ("n_eval".to_string(), cfg.n_eval as f64),
    ]);
    let (lhs, rhs, pass) = match worst {
        None => (0.0, 0.0, true),
        Some((idx, t)) => {
            let needed = t.needed_exponent(slack);
            inputs.insert("needed_exponent".into(), needed);
            inputs.insert("worst_segment".into(), (idx / cfg.n_subsets) as f64);
            inputs.insert("worst_subset".into(), (idx % cfg.n_subsets) as f64);
            inputs.insert("log_measure_ratio".into(), t.log_measure_ratio);
            (
                t.log_sup_interval.exp(),
                (d * t.log_measure_ratio + t.log_sup_omega).exp(),
                needed <= d,
            )
        }
    };
    Ok(VerificationReport::new(
        "remez1d", seed, inputs, lhs, rhs, pass, slack,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::MultiPoly;

    fn real_axis(lo: f64, hi: f64) -> RealSegment {
        RealSegment::new(
            ComplexVector::zeros(1),
            ComplexVector::basis(1, 0),
            lo,
            hi,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn linear_term_on_half() {
        let c = RemezConfig {
            segment: real_axis(0.0, 1.0),
            interval: (0.0, 1.0),
            omega: IntervalUnion::interval(0.0, 0.5).unwrap(),
        };
        let t = remez_term(&AnalyticExpr::coordinate(1, 0), &c, 128)
            .unwrap()
            .unwrap();
        let oracle = 2f64.ln() / 8f64.ln();
        assert!((t.exponent() - oracle).abs() < 1e-12);
        assert!((t.exponent() - 0.333).abs() < 1e-3);
    }

    #[test]
    fn constant_has_degree_zero() {
        let cfg = DegreeConfig {
            n_segments: 4,
            n_subsets: 8,
            ..Default::default()
        };
        let e = empirical_chebyshev_degree(&AnalyticExpr::constant(2, 3.0), 2.0, &cfg, 1).unwrap();
        assert_eq!(e.d_emp, 0.0);
    }

    #[test]
    fn zero_function_is_degenerate() {
        let cfg = DegreeConfig {
            n_segments: 2,
            n_subsets: 2,
            ..Default::default()
        };
        let e = empirical_chebyshev_degree(&AnalyticExpr::constant(2, 0.0), 2.0, &cfg, 1);
        assert!(matches!(e, Err(Error::Degenerate(_))));
    }

    #[test]
    fn linear_is_capped_and_self_consistent() {
        let cfg = DegreeConfig {
            n_segments: 8,
            n_subsets: 32,
            ..Default::default()
        };
        let f = AnalyticExpr::coordinate(2, 0);
        for seed in 0..3 {
            let e = empirical_chebyshev_degree(&f, 2.0, &cfg, seed).unwrap();
            assert!(e.d_emp <= 1.02, "seed {seed}: {}", e.d_emp);
            assert!(verify_remez_1d(&f, e.d_emp, &cfg, 0.0, seed).unwrap().pass);
        }
    }

    #[test]
    fn below_estimate_fails() {
        let cfg = DegreeConfig {
            n_segments: 6,
            n_subsets: 20,
            ..Default::default()
        };
        let f = AnalyticExpr::Poly(MultiPoly::monomial(2, 0, 3));
        let e = empirical_chebyshev_degree(&f, 2.0, &cfg, 5).unwrap();
        assert!(e.d_emp > 0.0);
        let rep = verify_remez_1d(&f, e.d_emp - 1e-3, &cfg, 0.0, 5).unwrap();
        assert!(!rep.pass);
        assert!(rep.measured_lhs > rep.bound_rhs);
    }
}
