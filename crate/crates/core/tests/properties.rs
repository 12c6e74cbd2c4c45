use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use remez_core::analysis::count_zeros;
use remez_core::bounds::quasipoly_zero_bound;
use remez_core::estimation::{
    distribution_function, empirical_chebyshev_degree, inputs, orlicz_norm, verify_remez_1d,
    ConvexBody, DegreeConfig, IntervalUnion, OrliczFunction, Region, VerificationReport, MIN_MC,
};
use remez_core::function::{AnalyticExpr, LinearFunctional, MultiPoly, QuasiPolynomial, UniPoly};

fn small_cfg() -> DegreeConfig {
    DegreeConfig {
        n_segments: 4,
        n_subsets: 8,
        n_eval: 128,
        ..Default::default()
    }
}

fn poly_strategy(dim: usize) -> impl Strategy<Value = MultiPoly> {
    let term = (prop::collection::vec(0u32..3, dim), -2.0f64..2.0);
    prop::collection::vec(term, 1..5).prop_filter_map("nonconstant", move |terms| {
        let p = MultiPoly::new(
            dim,
            terms.into_iter().map(|(e, c)| (e, Complex64::new(c, 0.0))),
        )
        .ok()?;
        (p.degree() > 0).then_some(p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn report_verdict_matches_comparison(lhs in 0.0f64..10.0, rhs in 0.0f64..10.0, slack in 0.0f64..0.5) {
        let r = VerificationReport::compare("t", 0, inputs([]), lhs, rhs, slack);
        prop_assert_eq!(r.pass, lhs <= rhs * (1.0 + slack));
    }

    #[test]
    fn random_subset_has_requested_measure(
        lo in -2.0f64..0.0,
        len in 0.1f64..3.0,
        ratio in 0.01f64..1.0,
        pieces in 1usize..6,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = IntervalUnion::random_subset(lo, lo + len, ratio, pieces, &mut rng).unwrap();
        prop_assert!((u.measure() - ratio * len).abs() <= 1e-9 * len);
        prop_assert!(u.within(lo, lo + len));
        prop_assert!(u.pieces().windows(2).all(|w| w[0].1 <= w[1].0));
    }

    #[test]
    fn degree_is_scale_invariant(p in poly_strategy(2), c in 0.01f64..100.0, seed in 0u64..1000) {
        let f = AnalyticExpr::Poly(p.clone());
        let g = AnalyticExpr::Poly(p.scale(Complex64::new(c, -c / 3.0)));
        let a = empirical_chebyshev_degree(&f, 2.0, &small_cfg(), seed).unwrap();
        let b = empirical_chebyshev_degree(&g, 2.0, &small_cfg(), seed).unwrap();
        prop_assert!(a.d_emp >= 0.0);
        prop_assert!((a.d_emp - b.d_emp).abs() <= 1e-9 * (1.0 + a.d_emp), "{} vs {}", a.d_emp, b.d_emp);
    }

    #[test]
    fn verify_at_empirical_degree_passes(p in poly_strategy(2), seed in 0u64..1000) {
        let f = AnalyticExpr::Poly(p);
        let e = empirical_chebyshev_degree(&f, 2.0, &small_cfg(), seed).unwrap();
        let r = verify_remez_1d(&f, e.d_emp, &small_cfg(), 0.0, seed).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn placed_roots_are_counted(
        roots in prop::collection::vec((0.05f64..3.0, 0.0f64..std::f64::consts::TAU), 1..7),
        radius in 0.2f64..2.8,
    ) {
        prop_assume!(roots.iter().all(|(m, _)| (m - radius).abs() > 0.02));
        let p = roots.iter().fold(UniPoly::one(), |acc, &(m, a)| {
            acc.mul(&UniPoly::new(vec![-Complex64::from_polar(m, a), Complex64::new(1.0, 0.0)]))
        });
        let z = count_zeros(&p, radius, 1024).unwrap();
        let inside = roots.iter().filter(|(m, _)| *m < radius).count();
        prop_assert_eq!(z.count, inside);
    }

    #[test]
    fn quasipoly_parameters_ignore_term_order(
        exps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..4),
        degs in prop::collection::vec(0u32..4, 3),
    ) {
        let terms: Vec<_> = exps
            .iter()
            .zip(&degs)
            .map(|(&(a, b), &d)| {
                let f = LinearFunctional::new(
                    remez_core::function::ComplexVector::new(vec![Complex64::new(a, 0.0), Complex64::new(0.0, b)]).unwrap(),
                );
                (MultiPoly::monomial(2, 0, d), f)
            })
            .collect();
        let mut reversed = terms.clone();
        reversed.reverse();
        let q = QuasiPolynomial::new(terms).unwrap();
        let r = QuasiPolynomial::new(reversed).unwrap();
        prop_assert_eq!(q.degree(), r.degree());
        prop_assert_eq!(q.n_terms(), r.n_terms());
        prop_assert!((q.spectrum_norm() - r.spectrum_norm()).abs() < 1e-12);
    }

    #[test]
    fn fine_zero_bound_below_coarse(k in 1u32..8, m in 0u32..10, big_m in 0.0f64..5.0) {
        let b = quasipoly_zero_bound(k, m, big_m).unwrap();
        prop_assert!(b.fine <= b.coarse);
        if m > 0 || big_m > 0.0 {
            prop_assert!(b.fine < b.coarse);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn distribution_is_monotone_and_saturates(p in poly_strategy(2), seed in 0u64..100) {
        let f = AnalyticExpr::Poly(p);
        let body = ConvexBody::ball(vec![0.0, 0.0], 0.8).unwrap();
        let mut prev = 0.0;
        for t in [0.0, 0.1, 0.5, 1.0, 2.0, 8.0] {
            let m = distribution_function(&f, &body, t, MIN_MC, seed).unwrap();
            prop_assert!(m >= prev);
            prev = m;
        }
        let top = distribution_function(&f, &body, 1e6, MIN_MC, seed).unwrap();
        prop_assert!((top - body.volume()).abs() < 1e-12);
    }

    #[test]
    fn orlicz_norm_is_homogeneous(p in poly_strategy(2), c in 0.1f64..10.0, seed in 0u64..100) {
        let f = AnalyticExpr::Poly(p.clone());
        let g = AnalyticExpr::Poly(p.scale(Complex64::new(c, 0.0)));
        let body = ConvexBody::centered_cube(2, 0.9).unwrap();
        let phi = OrliczFunction::new(1.5).unwrap();
        let a = orlicz_norm(&f, &body, phi, MIN_MC, seed).unwrap();
        let b = orlicz_norm(&g, &body, phi, MIN_MC, seed).unwrap();
        prop_assert!((b - c * a).abs() <= 1e-3 * c * a);
    }
}
