/// Degree above which `|x| >= 1` values are computed in the log domain.
const LOG_DOMAIN_DEGREE: u32 = 30;

/// `T_k(x)`: closed form `((x + sqrt(x^2-1))^k + (x - sqrt(x^2-1))^k) / 2`
/// for `|x| >= 1`, `cos(k arccos x)` inside.
pub fn chebyshev_t(k: u32, x: f64) -> f64 {
    if x.abs() < 1.0 {
        return (f64::from(k) * x.acos()).cos();
    }
    let sign = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    let y = x.abs();
    if k > LOG_DOMAIN_DEGREE {
        return sign * chebyshev_t_ln(k, y).exp();
    }
    let r = (y * y - 1.0).sqrt();
    let big = (y + r).powi(k as i32);
    // (y - r) = 1 / (y + r); avoids cancellation
    let small = (y + r).powi(-(k as i32));
    sign * (big + small) / 2.0
}

/// `ln T_k(x)` for `x >= 1`, stable for large `k`.
pub fn chebyshev_t_ln(k: u32, x: f64) -> f64 {
    assert!(x >= 1.0, "log-domain Chebyshev needs x >= 1");
    let l = (x + (x * x - 1.0).sqrt()).ln();
    let kl = f64::from(k) * l;
    // T_k = e^{kl} (1 + e^{-2kl}) / 2
    kl + (-2.0 * kl).exp().ln_1p() - std::f64::consts::LN_2
}

/// `T_k(x)` by the three-term recurrence; test oracle and small-k fallback.
pub fn chebyshev_t_recurrence(k: u32, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if k == 0 {
        return a;
    }
    for _ in 1..k {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_one() {
        for k in 0..=50 {
            assert!((chebyshev_t(k, 1.0) - 1.0).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn t3_at_two() {
        let oracle = 4.0 * 8.0 - 3.0 * 2.0;
        assert_eq!(oracle, 26.0);
        assert!((chebyshev_t(3, 2.0) - oracle).abs() < 1e-12);
        assert!((chebyshev_t_recurrence(3, 2.0) - oracle).abs() < 1e-12);
    }

    #[test]
    fn branches_agree_near_one() {
        // closed form continued with a complex square root vs cos(k arccos x),
        // and the real closed form vs cosh(k arccosh x), on either side of 1
        use num_complex::Complex64;
        let closed_complex = |k: u32, x: f64| {
            let x = Complex64::new(x, 0.0);
            let r = (x * x - 1.0).sqrt();
            (((x + r).powu(k) + (x - r).powu(k)) / 2.0).re
        };
        for k in 0..=20 {
            let inside: f64 = 1.0 - 1e-8;
            let cos_form = (f64::from(k) * inside.acos()).cos();
            assert!(
                (closed_complex(k, inside) - cos_form).abs() < 1e-9,
                "k = {k}"
            );
            assert!((chebyshev_t(k, inside) - cos_form).abs() < 1e-9, "k = {k}");
            let outside: f64 = 1.0 + 1e-8;
            let cosh_form = (f64::from(k) * outside.acosh()).cosh();
            assert!(
                (chebyshev_t(k, outside) - cosh_form).abs() < 1e-9,
                "k = {k}"
            );
        }
    }

    #[test]
    fn log_domain_matches_direct() {
        for k in [31, 40, 60] {
            let x = 1.3;
            let direct = chebyshev_t_recurrence(k, x);
            assert!((chebyshev_t(k, x) / direct - 1.0).abs() < 1e-10);
        }
        assert!(chebyshev_t_ln(2000, 50.0).is_finite());
    }

    #[test]
    fn odd_degree_negative_argument() {
        assert!((chebyshev_t(3, -2.0) + 26.0).abs() < 1e-12);
        assert!((chebyshev_t(4, -2.0) - chebyshev_t_recurrence(4, -2.0)).abs() < 1e-10);
    }
}
