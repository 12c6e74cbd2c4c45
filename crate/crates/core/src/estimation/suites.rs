use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::RngExt;
use serde::Serialize;

use super::body::{ConvexBody, ProductSet};
use super::composition::{complex_ball_sup, composition_experiment};
use super::convex::{verify_ball_pair, verify_brudnyi_ganzburg, verify_convex_body};
use super::degree::{empirical_chebyshev_degree, verify_remez_1d, DegreeConfig};
use super::distribution::{
    bourgain_halfmeasure_check, bourgain_scan_from, default_lambda_grid, holder_constant_from_tail,
    holder_from, log_bmo_from, orlicz_normalized, McSample, OrliczFunction, MIN_MC,
};
use super::quasi::quasipoly_verification;
use super::report::{inputs, Table, VerificationReport};
use super::structural::{calibrate, proposition3_checks, Prop3Input, StructuralSettings};
use super::sup::MIN_EVAL;
use crate::analysis::ValencyConfig;
use crate::bounds::logbmo_bound;
use crate::error::{invalid, Error, Result};
use crate::function::{
    exp_series, sample_real_segment, AnalyticExpr, ComplexVector, LinearFunctional, MultiPoly,
    QuasiPolynomial, SegmentDomain,
};
use crate::rng::{derive_seed, stream};

/// Parameters shared by every suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub r: f64,
    pub n_lines: usize,
    pub n_segments: usize,
    pub n_subsets: usize,
    pub n_mc: usize,
    pub n_eval: usize,
    /// Relative slack on sup-norm verdicts.
    pub slack: f64,
    /// Headroom on checks that use a constant fitted on other functions.
    pub structural_slack: f64,
    /// Exponent to verify; `None` picks the degree for polynomials and a
    /// held-out `1.25 d_emp` otherwise.
    pub d: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            r: 2.0,
            n_lines: 8,
            n_segments: 20,
            n_subsets: 50,
            n_mc: 20_000,
            n_eval: MIN_EVAL,
            slack: 1e-6,
            structural_slack: 0.25,
            d: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 1.0 && self.r.is_finite()) {
            return Err(invalid(format!("r = {} must exceed 1", self.r)));
        }
        if self.n_lines == 0 {
            return Err(invalid("need at least one line"));
        }
        if self.n_mc < MIN_MC {
            return Err(invalid(format!("n_mc = {} is below {MIN_MC}", self.n_mc)));
        }
        if !(self.slack >= 0.0) || !(self.structural_slack >= 0.0) {
            return Err(invalid("slack must be >= 0"));
        }
        if let Some(d) = self.d {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(invalid(format!("d = {d} must be finite and >= 0")));
            }
        }
        self.degree_config().validate()
    }

    pub fn degree_config(&self) -> DegreeConfig {
        DegreeConfig {
            n_segments: self.n_segments,
            n_subsets: self.n_subsets,
            n_eval: self.n_eval,
            ..Default::default()
        }
    }

    fn structural(&self) -> StructuralSettings {
        StructuralSettings {
            degree: self.degree_config(),
            n_lines: self.n_lines,
            valency: ValencyConfig::default(),
            slack: self.structural_slack,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Remez1d,
    Convex,
    LogBmo,
    Bourgain,
    Orlicz,
    Holder,
    Quasipoly,
    Prop3,
    Composition,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Remez1d,
        Suite::Convex,
        Suite::LogBmo,
        Suite::Bourgain,
        Suite::Orlicz,
        Suite::Holder,
        Suite::Quasipoly,
        Suite::Prop3,
        Suite::Composition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Remez1d => "remez1d",
            Suite::Convex => "convex",
            Suite::LogBmo => "logbmo",
            Suite::Bourgain => "bourgain",
            Suite::Orlicz => "orlicz",
            Suite::Holder => "holder",
            Suite::Quasipoly => "quasipoly",
            Suite::Prop3 => "prop3",
            Suite::Composition => "composition",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| invalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteOutput {
    pub reports: Vec<VerificationReport>,
    pub tables: Vec<Table>,
}

impl SuiteOutput {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    fn extend(&mut self, other: SuiteOutput) {
        self.reports.extend(other.reports);
        self.tables.extend(other.tables);
    }
}

fn real(c: f64) -> Complex64 {
    Complex64::new(c, 0.0)
}

/// `z1^3 - z1 z2 + z2^2 / 2 - 1/4`, used when no function is given.
pub fn default_function() -> AnalyticExpr {
    let p = MultiPoly::new(
        2,
        [
            (vec![3, 0], real(1.0)),
            (vec![1, 1], real(-1.0)),
            (vec![0, 2], real(0.5)),
            (vec![0, 0], real(-0.25)),
        ],
    )
    .expect("valid default polynomial");
    AnalyticExpr::Poly(p)
}

/// `(1 + z1) e^{z1}` in two variables.
pub fn default_quasipolynomial() -> QuasiPolynomial {
    let p = MultiPoly::new(2, [(vec![0, 0], real(1.0)), (vec![1, 0], real(1.0))])
        .expect("valid polynomial");
    QuasiPolynomial::new(vec![(p, LinearFunctional::new(ComplexVector::basis(2, 0)))])
        .expect("valid quasipolynomial")
}

/// `z1 / 2` in one variable.
pub fn default_composition_inner() -> MultiPoly {
    MultiPoly::variable(1, 0).scale(real(0.5))
}

/// The exponent to verify: `cfg.d`, else the degree of a polynomial, else
/// `1.25 d_emp` measured on configurations independent of the check.
pub fn default_exponent(f: &AnalyticExpr, cfg: &RunConfig) -> Result<f64> {
    if let Some(d) = cfg.d {
        return Ok(d);
    }
    if let Some(p) = f.as_poly() {
        return Ok(f64::from(p.degree()));
    }
    let held_out = derive_seed(cfg.seed, &[0xD0]);
    Ok(1.25 * empirical_chebyshev_degree(f, cfg.r, &cfg.degree_config(), held_out)?.d_emp)
}

/// Runs one suite (or all of them, in the order of [`Suite::EACH`]).
pub fn run_suite(suite: Suite, f: Option<&AnalyticExpr>, cfg: &RunConfig) -> Result<SuiteOutput> {
    cfg.validate()?;
    if suite == Suite::All {
        let mut out = SuiteOutput::default();
        for s in Suite::EACH {
            out.extend(run_suite(s, f, cfg)?);
        }
        return Ok(out);
    }
    let seed = derive_seed(cfg.seed, &[suite as u64]);
    let default = default_function();
    let g = f.unwrap_or(&default);
    let mut out = match suite {
        Suite::Remez1d => remez1d(g, cfg, seed),
        Suite::Convex => convex(g, cfg, seed),
        Suite::LogBmo => logbmo(g, cfg, seed),
        Suite::Bourgain => bourgain(g, cfg, seed),
        Suite::Orlicz => orlicz(g, cfg, seed),
        Suite::Holder => holder(g, cfg, seed),
        Suite::Quasipoly => {
            let q = match f {
                Some(e) => e.as_quasi().ok_or_else(|| {
                    invalid("the quasipoly suite needs a polynomial or quasipolynomial")
                })?,
                None => default_quasipolynomial(),
            };
            quasi(&q, cfg, seed)
        }
        Suite::Prop3 => prop3(g, cfg, seed),
        Suite::Composition => {
            let p = match f {
                Some(e) => e
                    .as_poly()
                    .cloned()
                    .ok_or_else(|| invalid("the composition suite needs a polynomial"))?,
                None => default_composition_inner(),
            };
            composition(&p, cfg, seed)
        }
        Suite::All => unreachable!("handled above"),
    }?;
    // reports carry the run seed; sub-seeds follow from it
    for r in &mut out.reports {
        r.seed = cfg.seed;
    }
    Ok(out)
}

fn remez1d(f: &AnalyticExpr, cfg: &RunConfig, seed: u64) -> Result<SuiteOutput> {
    let d = default_exponent(f, cfg)?;
    let mut dc = cfg.degree_config();
    dc.domain = SegmentDomain::RealBall;
    let rep = verify_remez_1d(f, d, &dc, cfg.slack, seed)?;
    Ok(SuiteOutput {
        reports: vec![rep],
        tables: Vec::new(),
    })
}

/// Ball, centered cube and simplex in `B(0,1)` of dimension `n`.
pub fn standard_bodies(n: usize) -> Result<Vec<ConvexBody>> {
    let mut vertices = vec![vec![0.0; n]];
    for j in 0..n {
        let mut v = vec![0.0; n];
        v[j] = 0.9;
        vertices.push(v);
    }
    // shift towards the origin so the body is not flush with the axes
    let shift = 0.9 / (n as f64 + 1.0);
    for v in &mut vertices {
        for x in v.iter_mut() {
            *x -= shift;
        }
    }
    Ok(vec![
        ConvexBody::ball(vec![0.0; n], 0.95)?,
        ConvexBody::centered_cube(n, 0.95)?,
        ConvexBody::simplex(vertices)?,
    ])
}

/// Ball of radius `fraction` times the inradius-like scale, centered at
/// the body's center.
fn inner_ball(body: &ConvexBody, radius: f64) -> Result<ConvexBody> {
    let b = ConvexBody::ball(body.center(), radius)?;
    if !body.contains_body(&b) {
        return Err(invalid("inner ball does not fit"));
    }
    Ok(b)
}

fn convex(f: &AnalyticExpr, cfg: &RunConfig, seed: u64) -> Result<SuiteOutput> {
    let d = default_exponent(f, cfg)?;
    let n = f.dim();
    let mut out = SuiteOutput::default();
    for (i, body) in standard_bodies(n)?.iter().enumerate() {
        let s = derive_seed(seed, &[i as u64]);
        let omega = inner_ball(body, 0.1)?;
        out.reports.push(verify_convex_body(
            f, body, &omega, d, cfg.n_mc, cfg.slack, s,
        )?);
    }
    let cube = ConvexBody::centered_cube(n, 0.95)?;
    let a = 0.95 / (n as f64).sqrt();
    let (lo, hi) = (vec![-a; n], vec![a; n]);
    let mut rng = stream(seed, &[0xB0]);
    let omega = ProductSet::random_in_box(&lo, &hi, 0.2, &mut rng)?;
    out.reports.push(verify_convex_body(
        f,
        &cube,
        &omega,
        d,
        cfg.n_mc,
        cfg.slack,
        derive_seed(seed, &[3]),
    )?);
    if let Some(p) = f.as_poly() {
        out.reports.extend(verify_brudnyi_ganzburg(
            p,
            &cube,
            &omega,
            cfg.n_mc,
            cfg.slack,
            derive_seed(seed, &[4]),
        )?);
    }
    let outer = ConvexBody::ball(vec![0.0; n], 0.95)?;
    let mut c = vec![0.0; n];
    c[0] = 0.4;
    let inner = ConvexBody::ball(c, 0.2)?;
    out.reports.extend(verify_ball_pair(
        f,
        &outer,
        &inner,
        d,
        cfg.n_mc,
        cfg.slack,
        derive_seed(seed, &[5]),
    )?);
    Ok(out)
}

fn logbmo(f: &AnalyticExpr, cfg: &RunConfig, seed: u64) -> Result<SuiteOutput> {
    let d = default_exponent(f, cfg)?;
    let n = f.dim();
    let bound = logbmo_bound(d.max(f64::MIN_POSITIVE), n as u32)?;
    let mut out = SuiteOutput::default();
    for (i, body) in standard_bodies(n)?.iter().enumerate() {
        let sample = McSample::new(f, body, cfg.n_mc, derive_seed(seed, &[i as u64]))?;
        let est = log_bmo_from(&sample, sample.refined_sup(f, body)?)?;
        // pass within three Monte Carlo standard errors
        let slack = if bound > 0.0 {
            3.0 * est.stderr / bound
        } else {
            0.0
        };
        let mut rep = VerificationReport::compare(
            format!("logbmo.{}", body.shape_name()),
            seed,
            inputs([
                ("d", d),
                ("n", n as f64),
                ("stderr", est.stderr),
                ("rearranged", est.rearranged),
                ("vanishing_fraction", est.vanishing_fraction),
            ]),
            est.value,
            bound,
            slack,
        );
        if !est.agree {
            rep = rep.with_note("rearrangement form disagrees beyond 3 standard errors");
        }
        out.reports.push(rep);
    }
    Ok(out)
}

/// `ceil(d_emp) + 1`.
fn d_tilde(f: &AnalyticExpr, cfg: &RunConfig, seed: u64) -> Result<u32> {
    let e = empirical_chebyshev_degree(f, cfg.r, &cfg.degree_config(), seed)?;
    Ok(e.d_emp.ceil() as u32 + 1)
}

fn scan_table(name: &str, rows: &[(f64, f64)], c1: f64, alpha: f64) -> Table {
    let mut t = Table::new(name, &["lambda", "fraction", "fit"]);
    for &(l, p) in rows {
        t.push(vec![l, p, (c1 * (-l.powf(alpha)).exp()).min(1.0)]);
    }
    t
}

/// Fraction of sampled `(segment, I)` pairs passing the half-measure check.
const HALF_MEASURE_CONFIGS: usize = 100;

fn bourgain(f: &AnalyticExpr, cfg: &RunConfig, seed: u64) -> Result<SuiteOutput> {
    let dt = d_tilde(f, cfg, derive_seed(seed, &[0xD]))?;
    let mut out = SuiteOutput::default();
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for i in 0..HALF_MEASURE_CONFIGS {
        let mut rng = stream(seed, &[0xA, i as u64]);
        let seg = sample_real_segment(f.dim(), SegmentDomain::RealBall, &mut rng)?;
        let (a, b) = (rng.random::<f64>(), rng.random::<f64>());
        let (a, b) = (a.min(b), a.max(b));
        if b - a < 1e-3 {
            continue;
        }
        let len = seg.t_hi() - seg.t_lo();
        let interval = (seg.t_lo() + a * len, seg.t_lo() + b * len);
        let h = bourgain_halfmeasure_check(f, &seg, interval, dt, 4 * cfg.n_eval)?;
        if h.sup > 0.0 {
            worst = worst.min(h.measure / h.half);
            if !h.pass {
                failures += 1;
            }
        }
    }
    out.reports.push(VerificationReport::new(
        "bourgain.half_measure",
        seed,
        inputs([
            ("d_tilde", f64::from(dt)),
            ("configs", HALF_MEASURE_CONFIGS as f64),
            ("worst_ratio", worst),
        ]),
        failures as f64,
        0.0,
        failures == 0,
        0.0,
    ));
    for (i, body) in standard_bodies(f.dim())?.iter().enumerate() {
        let sample = McSample::new(f, body, cfg.n_mc, derive_seed(seed, &[0xB, i as u64]))?;
        let scan = bourgain_scan_from(&sample, &default_lambda_grid(&sample), dt)?;
        out.reports.push(
            VerificationReport::new(
                format!("bourgain.fit.{}", body.shape_name()),
                seed,
                inputs([
                    ("c1", scan.c1),
                    ("c1_envelope", scan.c1_envelope),
                    ("c2", scan.c2),
                    ("alpha", scan.alpha),
                    ("d_tilde", f64::from(dt)),
                ]),
                0.9,
                scan.r_squared,
                scan.r_squared >= 0.9,
                0.0,
            )
            .with_note("lhs is the required R^2, rhs the fitted R^2"),
        );
        out.tables.push(scan_table(
            &format!("bourgain_scan.{}", body.shape_name()),
            &scan.rows,
            scan.c1,
            scan.alpha,
        ));
    }
    Ok(out)
}

fn orlicz(f: &AnalyticExpr, cfg: &RunConfig, seed: u64) -> Result<SuiteOutput> {
    let dt = d_tilde(f, cfg, derive_seed(seed, &[0xD]))?;
    let mut out = SuiteOutput::default();
    for (i, body) in standard_bodies(f.dim())?.iter().enumerate() {
        let sample = McSample::new(f, body, cfg.n_mc, derive_seed(seed, &[i as u64]))?;
        let scan = bourgain_scan_from(&sample, &default_lambda_grid(&sample), dt)?;
        let phi = OrliczFunction::new(scan.alpha)?;
        let norm = orlicz_normalized(&sample, phi)?;
        let avg = sample.mean();
        // tail c1 e^{-lambda^alpha} gives avg Phi(|f| / (K avg)) <= c1 / (K^alpha - 1)
        let k = (1.0 + scan.c1_envelope).powf(1.0 / scan.alpha);
        out.reports.push(VerificationReport::compare(
            format!("orlicz.{}", body.shape_name()),
            seed,
            inputs([
                ("p", scan.alpha),
                ("c1", scan.c1_envelope),
                ("avg", avg),
                ("K", k),
            ]),
            norm,
            k * avg,
            cfg.slack,
        ));
        let mut doubled = sample.clone();
        for v in &mut doubled.values {
            *v *= 2.0;
        }
        let norm2 = orlicz_normalized(&doubled, phi)?;
        let rel = (norm2 - 2.0 * norm).abs() / (2.0 * norm).max(f64::MIN_POSITIVE);
        out.reports.push(VerificationReport::compare(
            format!("orlicz.homogeneity.{}", body.shape_name()),
            seed,
            inputs([("norm", norm), ("norm_2f", norm2)]),
            rel,
            1e-3,
            0.0,
        ));
    }
    Ok(out)
}

fn holder(f: &AnalyticExpr, cfg: &RunConfig, seed: u64) -> Result<SuiteOutput> {
    let dt = d_tilde(f, cfg, derive_seed(seed, &[0xD]))?;
    let mut out = SuiteOutput::default();
    for (i, body) in standard_bodies(f.dim())?.iter().enumerate() {
        let sample = McSample::new(f, body, cfg.n_mc, derive_seed(seed, &[i as u64]))?;
        let scan = bourgain_scan_from(&sample, &default_lambda_grid(&sample), dt)?;
        for s in 2..=4 {
            let h = holder_from(&sample, s)?;
            let c = holder_constant_from_tail(scan.c1_envelope, scan.alpha, s)?;
            out.reports.push(VerificationReport::compare(
                format!("holder.s{s}.{}", body.shape_name()),
                seed,
                inputs([
                    ("s", f64::from(s)),
                    ("stderr", h.stderr),
                    ("c1", scan.c1_envelope),
                    ("alpha", scan.alpha),
                ]),
                h.ratio,
                c,
                3.0 * h.stderr / c,
            ));
        }
    }
    Ok(out)
}

/// Shifts per line in the quasipolynomial suite.
const QUASI_SHIFTS: usize = 20;

fn quasi(q: &QuasiPolynomial, cfg: &RunConfig, seed: u64) -> Result<SuiteOutput> {
    // the degree part is stated at r = 2
    let settings = cfg.structural();
    let calib = calibrate(2.0, &settings, derive_seed(seed, &[0xCA]))?;
    let reports = quasipoly_verification(
        q,
        cfg.n_lines,
        QUASI_SHIFTS,
        Some(&calib),
        &cfg.degree_config(),
        cfg.structural_slack,
        seed,
    )?;
    Ok(SuiteOutput {
        reports,
        tables: Vec::new(),
    })
}

/// Taylor coefficients kept for `phi = exp` in the structural checks.
const PHI_TERMS: usize = 24;

fn prop3(f: &AnalyticExpr, cfg: &RunConfig, seed: u64) -> Result<SuiteOutput> {
    let settings = cfg.structural();
    let calib = calibrate(cfg.r, &settings, derive_seed(seed, &[0xCA]))?;
    let dim = f.dim();
    let input = Prop3Input {
        f: f.clone(),
        g: AnalyticExpr::scale(real(0.5), AnalyticExpr::coordinate(dim, dim - 1)),
        phi: exp_series(PHI_TERMS),
        direction: ComplexVector::basis(dim, 0),
        m: 1,
    };
    let reports = proposition3_checks(&input, &calib, &settings, seed)?;
    let mut t = Table::new("calibration", &["member", "d_emp", "valency", "degree"]);
    for (i, m) in calib.members.iter().enumerate() {
        t.push(vec![
            i as f64,
            m.d_emp,
            m.valency as f64,
            f64::from(m.degree),
        ]);
    }
    Ok(SuiteOutput {
        reports,
        tables: vec![t],
    })
}

const COMPOSITION_K: [usize; 4] = [2, 4, 8, 16];
/// Largest accepted `d_emp(h_16 o f) / d_emp(h_2 o f)`.
const COMPOSITION_GROWTH: f64 = 2.0;

fn composition(f: &MultiPoly, cfg: &RunConfig, seed: u64) -> Result<SuiteOutput> {
    let fe = AnalyticExpr::Poly(f.clone());
    let sup = complex_ball_sup(&fe, cfg.r, 4096, seed)?;
    let (inner, scale) = if sup < 0.9 {
        (f.clone(), 1.0)
    } else {
        let s = 0.9 / sup;
        (f.scale(real(s)), s)
    };
    let series = exp_series(COMPOSITION_K[3] + 1);
    let table = composition_experiment(
        &inner,
        &series,
        &COMPOSITION_K,
        cfg.r,
        &cfg.degree_config(),
        seed,
    )?;
    let growth = table.growth_factor();
    let mut rep = VerificationReport::compare(
        "composition.growth",
        seed,
        inputs([
            ("f_scale", scale),
            ("sup_f", table.sup_f),
            ("classical_growth", 8.0),
        ]),
        growth,
        COMPOSITION_GROWTH,
        0.0,
    );
    if scale != 1.0 {
        rep = rep.with_note("f rescaled so that sup |f| < 1 on the complex ball");
    }
    Ok(SuiteOutput {
        reports: vec![rep],
        tables: vec![table.table()],
    })
}
