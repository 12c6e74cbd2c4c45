//! Acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngExt};
use rand_distr::{Distribution, StandardNormal};
use remez_core::analysis::{bernstein_index, count_zeros};
use remez_core::bounds::bg_bound;
use remez_core::estimation::{
    bourgain_distribution_scan, bourgain_halfmeasure_check, composition_experiment,
    default_lambda_grid, empirical_chebyshev_degree, format_reports, log_bmo_integral, orlicz_norm,
    quasipoly_zero_counts, random_quasipolynomial, reference_family, reverse_holder_ratio,
    run_suite, verify_brudnyi_ganzburg, verify_remez_1d, ConvexBody, DegreeConfig, McSample,
    OrliczFunction, OutputFormat, ProductSet, RunConfig, Suite, SuiteOutput,
};
use remez_core::function::{
    exp_series, sample_real_segment, AnalyticExpr, MultiPoly, SegmentDomain, UniPoly,
};
use remez_core::rng::stream;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn real(c: f64) -> Complex64 {
    Complex64::new(c, 0.0)
}

/// Real polynomial of exact degree `deg` with Gaussian coefficients.
fn random_real_poly<R: Rng + ?Sized>(dim: usize, deg: u32, rng: &mut R) -> MultiPoly {
    let mut terms = Vec::new();
    let mut push_all = |e: &[u32], rng: &mut R| {
        let c: f64 = StandardNormal.sample(rng);
        terms.push((e.to_vec(), real(c)));
    };
    fn each(dim: usize, deg: u32, visit: &mut dyn FnMut(&[u32])) {
        fn rec(e: &mut Vec<u32>, j: usize, left: u32, visit: &mut dyn FnMut(&[u32])) {
            if j + 1 == e.len() {
                for a in 0..=left {
                    e[j] = a;
                    visit(e);
                }
                e[j] = 0;
                return;
            }
            for a in 0..=left {
                e[j] = a;
                rec(e, j + 1, left - a, visit);
            }
            e[j] = 0;
        }
        rec(&mut vec![0; dim], 0, deg, visit);
    }
    let mut exps = Vec::new();
    each(dim, deg, &mut |e| exps.push(e.to_vec()));
    for e in &exps {
        push_all(e, rng);
    }
    let mut lead = vec![0; dim];
    lead[0] = deg;
    terms.push((lead, real(1.0)));
    MultiPoly::new(dim, terms).expect("valid polynomial")
}

fn criterion_1() -> Outcome {
    let cfg = DegreeConfig {
        domain: SegmentDomain::RealBall,
        ..Default::default()
    };
    let mut rng = stream(1, &[]);
    let (mut fails, mut worst_gap) = (0, f64::NEG_INFINITY);
    for i in 0..200u64 {
        let deg = rng.random_range(1..=8);
        let p = random_real_poly(2, deg, &mut rng);
        let d = f64::from(p.degree());
        let f = AnalyticExpr::Poly(p);
        let rep = verify_remez_1d(&f, d, &cfg, 0.0, i).expect("verify");
        let e = empirical_chebyshev_degree(&f, 2.0, &cfg, i).expect("degree");
        worst_gap = worst_gap.max(e.d_emp - d);
        if !rep.pass || e.d_emp > d + 0.05 || rep.inputs["n_configs"] != 1000.0 {
            fails += 1;
        }
    }
    outcome(
        fails == 0,
        format!("200 polynomials x 1000 configs, failures {fails}, max d_emp - deg {worst_gap:.4}"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = stream(2, &[]);
    let (mut fails, mut min_lambda, mut worst) = (0, 1.0f64, 0.0f64);
    for i in 0..100u64 {
        let deg = rng.random_range(1..=4);
        let p = random_real_poly(2, deg, &mut rng);
        // random box inside the ball of radius 0.99
        let half = [rng.random_range(0.1..0.35), rng.random_range(0.1..0.35)];
        let c = [rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3)];
        let lo = vec![c[0] - half[0], c[1] - half[1]];
        let hi = vec![c[0] + half[0], c[1] + half[1]];
        let body = ConvexBody::cube(lo.clone(), hi.clone()).expect("box in ball");
        let lambda = rng.random_range(0.1..1.0);
        let omega = ProductSet::random_in_box(&lo, &hi, lambda, &mut rng).expect("product set");
        let reps = verify_brudnyi_ganzburg(&p, &body, &omega, 20_000, 0.05, i).expect("bg");
        min_lambda = min_lambda.min(reps[0].inputs["lambda"]);
        worst = worst.max(reps[0].measured_lhs / reps[0].bound_rhs);
        if !reps.iter().all(|r| r.pass) {
            fails += 1;
        }
    }
    let sanity = (bg_bound(1, 1, 0.5).expect("bg").value - 3.0).abs() < 1e-12;
    outcome(
        fails == 0 && sanity && min_lambda >= 0.1 - 1e-12,
        format!(
            "100 instances, failures {fails}, min lambda {min_lambda:.3}, max lhs/rhs {worst:.3e}"
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = stream(3, &[]);
    let (mut mismatches, mut worst_residual) = (0, 0.0f64);
    for _ in 0..200 {
        let deg = rng.random_range(1..=8usize);
        let mut c: Vec<Complex64> = (0..=deg)
            .map(|_| {
                Complex64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            })
            .collect();
        c[deg] = Complex64::new(1.0, 0.0);
        // companion matrix of the monic polynomial
        let mut m = DMatrix::<Complex64>::zeros(deg, deg);
        for i in 1..deg {
            m[(i, i - 1)] = real(1.0);
        }
        for i in 0..deg {
            m[(i, deg - 1)] = -c[i];
        }
        let roots: Vec<f64> = m
            .eigenvalues()
            .expect("eigenvalues")
            .iter()
            .map(|z| z.norm())
            .collect();
        // radius at least 1e-3 away from every root modulus
        let radius = loop {
            let r = rng.random_range(0.2..3.0);
            if roots.iter().all(|&a| (a - r).abs() > 1e-3) {
                break r;
            }
        };
        let expected = roots.iter().filter(|&&a| a < radius).count();
        let z = count_zeros(&UniPoly::new(c), radius, 1024).expect("count");
        worst_residual = worst_residual.max((z.raw_winding - z.count as f64).abs());
        if z.count != expected {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0 && worst_residual < 1e-6,
        format!("200 polynomials, mismatches {mismatches}, max residual {worst_residual:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=6u32 {
        let f = AnalyticExpr::Poly(MultiPoly::monomial(2, 0, k));
        let b = bernstein_index(&f, 1.5, 1.25, 2.0, 8, 4).expect("index");
        worst = worst.max((b.value - f64::from(k) * 1.25f64.ln()).abs());
    }
    outcome(
        worst < 1e-3,
        format!("k = 1..6, max |b - k log 1.25| = {worst:.2e}"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = stream(5, &[]);
    let (mut fails, mut counts, mut unresolved, mut tightest) = (0, 0, 0, 0.0f64);
    for i in 0..50u64 {
        let q = random_quasipolynomial(2, 3, 3, 1.0, &mut rng).expect("quasi");
        // the two coordinate axes plus 18 random lines
        let s = quasipoly_zero_counts(&q, 18, 20, i).expect("counts");
        counts += s.n_counts;
        unresolved += s.n_unresolved;
        tightest = tightest.max(s.max_count as f64 / s.bound.fine);
        if s.max_count as f64 > s.bound.fine {
            fails += 1;
        }
    }
    outcome(
        fails == 0,
        format!("50 quasipolynomials, {counts} counts, {unresolved} unresolved, failures {fails}, max count/bound {tightest:.3}"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = stream(6, &[]);
    let cfg = DegreeConfig {
        n_segments: 10,
        n_subsets: 20,
        domain: SegmentDomain::RealBall,
        ..Default::default()
    };
    let (mut fails, mut done, mut worst) = (0, 0, f64::INFINITY);
    for i in 0..50u64 {
        let deg = rng.random_range(1..=6);
        let f = AnalyticExpr::Poly(random_real_poly(2, deg, &mut rng));
        let e = empirical_chebyshev_degree(&f, 2.0, &cfg, i).expect("degree");
        let dt = e.d_emp.ceil() as u32 + 1;
        for _ in 0..10 {
            let seg = sample_real_segment(2, SegmentDomain::RealBall, &mut rng).expect("segment");
            let len = seg.t_hi() - seg.t_lo();
            let (a, b) = loop {
                let (a, b): (f64, f64) = (rng.random(), rng.random());
                if (a - b).abs() > 1e-2 {
                    break (a.min(b), a.max(b));
                }
            };
            let interval = (seg.t_lo() + a * len, seg.t_lo() + b * len);
            let h = bourgain_halfmeasure_check(&f, &seg, interval, dt, 4096).expect("check");
            worst = worst.min(h.measure / (2.0 * h.half));
            done += 1;
            if !h.pass {
                fails += 1;
            }
        }
    }
    outcome(
        fails == 0 && done == 500,
        format!("{done} configs, failures {fails}, min measured fraction {worst:.3}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = stream(7, &[]);
    let (mut fails, mut worst) = (0, 0.0f64);
    for i in 0..50u64 {
        let n = 1 + (i % 3) as usize;
        let deg = rng.random_range(1..=5);
        let p = random_real_poly(n, deg, &mut rng);
        let d = f64::from(p.degree());
        let f = AnalyticExpr::Poly(p);
        let body = if i % 2 == 0 {
            ConvexBody::ball(vec![0.0; n], 0.9).expect("ball")
        } else {
            ConvexBody::centered_cube(n, 0.9).expect("cube")
        };
        let est = log_bmo_integral(&f, &body, 20_000, i).expect("log-bmo");
        let bound = d * (1.0 + (4.0 * n as f64).ln());
        worst = worst.max(est.value / bound);
        if est.value > bound + 3.0 * est.stderr || !est.agree {
            fails += 1;
        }
    }
    outcome(
        fails == 0,
        format!("50 polynomials, failures {fails}, max value/bound {worst:.3}"),
    )
}

fn criterion_8() -> Outcome {
    // homogeneity
    let body = ConvexBody::centered_cube(2, 0.9).expect("cube");
    let f = AnalyticExpr::Poly(
        MultiPoly::variable(2, 0)
            .mul(&MultiPoly::variable(2, 1))
            .add(&MultiPoly::constant(2, real(0.3))),
    );
    let f2 = AnalyticExpr::scale(real(2.0), f.clone());
    let phi = OrliczFunction::new(1.0).expect("phi");
    let a = orlicz_norm(&f, &body, phi, 20_000, 8).expect("norm");
    let b = orlicz_norm(&f2, &body, phi, 20_000, 8).expect("norm");
    let homog = (b - 2.0 * a).abs() / (2.0 * a);

    // reverse Hoelder for z1 on [-1, 1]
    let interval = ConvexBody::ball(vec![0.0], 1.0).expect("interval");
    let z1 = AnalyticExpr::coordinate(1, 0);
    let h = reverse_holder_ratio(&z1, &interval, 2, 50_000, 8).expect("ratio");
    let target = 2.0 / 3f64.sqrt();
    let holder_ok = (h.ratio - target).abs() <= 3.0 * h.stderr;

    // tail fits on the frozen reference family
    let ball = ConvexBody::ball(vec![0.0, 0.0], 0.9).expect("ball");
    let mut r2: Vec<(String, f64)> = Vec::new();
    for (i, (label, p)) in reference_family().into_iter().enumerate() {
        let d_tilde = p.degree() + 1;
        let f = AnalyticExpr::Poly(p);
        let sample = McSample::new(&f, &ball, 20_000, i as u64).expect("sample");
        let grid = default_lambda_grid(&sample);
        let scan =
            bourgain_distribution_scan(&f, &ball, &grid, d_tilde, 20_000, i as u64).expect("scan");
        r2.push((label, scan.r_squared));
    }
    let min_r2 = r2.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    let below: Vec<String> = r2
        .iter()
        .filter(|m| m.1 < 0.9)
        .map(|m| format!("{} {:.3}", m.0, m.1))
        .collect();
    outcome(
        homog < 1e-3 && holder_ok && min_r2 >= 0.9,
        format!(
            "homogeneity {homog:.1e}, holder {:.4} vs {target:.4} (se {:.1e}), min R^2 {min_r2:.3}, below 0.9: [{}]",
            h.ratio,
            h.stderr,
            below.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let f = MultiPoly::variable(1, 0).scale(real(0.5));
    let series = exp_series(17);
    let mut growths = Vec::new();
    for seed in [1u64, 2, 3] {
        let t = composition_experiment(
            &f,
            &series,
            &[2, 4, 8, 16],
            1.5,
            &DegreeConfig::default(),
            seed,
        )
        .expect("table");
        let classical = t.rows[3].classical / t.rows[0].classical;
        if classical != 8.0 {
            return outcome(false, format!("classical growth {classical}"));
        }
        growths.push(t.growth_factor());
    }
    let pass = growths.iter().all(|&g| g < 2.0);
    outcome(
        pass,
        format!("r = 1.5, growth factors {growths:.3?} (classical 8x)"),
    )
}

fn render(out: &SuiteOutput) -> String {
    let mut s = format_reports(&out.reports, OutputFormat::Jsonl);
    for t in &out.tables {
        s.push_str(&t.to_csv());
    }
    s
}

fn criterion_10() -> Outcome {
    let cfg = RunConfig {
        seed: 10,
        ..Default::default()
    };
    let a = render(&run_suite(Suite::All, None, &cfg).expect("run"));
    let b = render(&run_suite(Suite::All, None, &cfg).expect("run"));
    let pool = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("pool")
    };
    let serial = pool(1).install(|| render(&run_suite(Suite::All, None, &cfg).expect("run")));
    let wide = pool(4).install(|| render(&run_suite(Suite::All, None, &cfg).expect("run")));
    let same = a == b && a == serial && a == wide;
    outcome(
        same,
        format!(
            "{} bytes; repeat, 1-thread and 4-thread runs identical: {same}",
            a.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 remez polynomial cap", criterion_1),
        ("2 brudnyi-ganzburg on boxes", criterion_2),
        ("3 zero counts vs companion matrix", criterion_3),
        ("4 bernstein index of z1^k", criterion_4),
        ("5 quasipolynomial zero bound", criterion_5),
        ("6 half-measure lemma", criterion_6),
        ("7 log-bmo chain", criterion_7),
        ("8 orlicz / reverse hoelder / tail fit", criterion_8),
        ("9 composition experiment", criterion_9),
        ("10 determinism", criterion_10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {name}: {} ({}; {secs:.1} s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
