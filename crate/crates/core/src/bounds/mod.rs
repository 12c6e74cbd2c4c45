//! Closed-form constants of the Remez-type inequalities.
//!
//! Multiplicative sup-norm bounds are returned as [`BoundValue`]s carrying
//! both the value and its natural log; the value saturates to `+inf` when it
//! exceeds the `f64` range, the log stays exact.

mod chebyshev;

use std::f64::consts::PI;

use serde::Serialize;

pub use chebyshev::{chebyshev_t, chebyshev_t_ln, chebyshev_t_recurrence};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub log_value: f64,
    pub formula: &'static str,
    pub inputs: Vec<(&'static str, f64)>,
}

impl BoundValue {
    fn from_log(log_value: f64, formula: &'static str, inputs: Vec<(&'static str, f64)>) -> Self {
        Self {
            value: log_value.exp(),
            log_value,
            formula,
            inputs,
        }
    }
}

fn check_measures(big: f64, small: f64, what: &str) -> Result<()> {
    if !(small > 0.0) || !(big > 0.0) || !small.is_finite() || !big.is_finite() {
        return Err(invalid(format!(
            "{what}: measures must be positive and finite"
        )));
    }
    if small > big {
        return Err(invalid(format!(
            "{what}: subset measure {small} exceeds {big}"
        )));
    }
    Ok(())
}

fn check_exponent(d: f64) -> Result<()> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(invalid(format!("exponent {d} must be finite and >= 0")));
    }
    Ok(())
}

/// Brudnyi–Ganzburg constant `T_k((1 + beta)/(1 - beta))`, `beta = (1 - lambda)^{1/n}`.
pub fn bg_bound(k: u32, n: u32, lambda: f64) -> Result<BoundValue> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(invalid(format!("lambda = {lambda} must lie in (0, 1]")));
    }
    if n == 0 {
        return Err(invalid("dimension n must be >= 1"));
    }
    let inputs = vec![("k", f64::from(k)), ("n", f64::from(n)), ("lambda", lambda)];
    if lambda == 1.0 {
        return Ok(BoundValue::from_log(0.0, "bg", inputs));
    }
    let beta = (1.0 - lambda).powf(1.0 / f64::from(n));
    let x = (1.0 + beta) / (1.0 - beta);
    Ok(BoundValue::from_log(chebyshev_t_ln(k, x), "bg", inputs))
}

/// `(4 n |V| / |omega|)^k`.
pub fn bg_simplified(k: u32, n: u32, vol_v: f64, vol_omega: f64) -> Result<BoundValue> {
    check_measures(vol_v, vol_omega, "bg_simplified")?;
    let log = f64::from(k) * (4.0 * f64::from(n) * vol_v / vol_omega).ln();
    Ok(BoundValue::from_log(
        log,
        "bg_simplified",
        vec![
            ("k", f64::from(k)),
            ("n", f64::from(n)),
            ("vol_V", vol_v),
            ("vol_omega", vol_omega),
        ],
    ))
}

/// `(4 |I| / |omega|)^d`.
pub fn remez_interval_bound(len_i: f64, len_omega: f64, d: f64) -> Result<BoundValue> {
    check_measures(len_i, len_omega, "remez")?;
    check_exponent(d)?;
    Ok(BoundValue::from_log(
        d * (4.0 * len_i / len_omega).ln(),
        "remez",
        vec![("len_I", len_i), ("len_omega", len_omega), ("d", d)],
    ))
}

/// `(4 n |V| / |omega|)^d`.
pub fn convex_body_bound(n: u32, vol_v: f64, vol_omega: f64, d: f64) -> Result<BoundValue> {
    check_measures(vol_v, vol_omega, "convex")?;
    check_exponent(d)?;
    if n == 0 {
        return Err(invalid("dimension n must be >= 1"));
    }
    Ok(BoundValue::from_log(
        d * (4.0 * f64::from(n) * vol_v / vol_omega).ln(),
        "convex",
        vec![
            ("n", f64::from(n)),
            ("vol_V", vol_v),
            ("vol_omega", vol_omega),
            ("d", d),
        ],
    ))
}

/// `(4 R1 / R2)^d` for a ball of radius `R2` inside a ball of radius `R1`.
pub fn ball_pair_bound(r1: f64, r2: f64, d: f64) -> Result<BoundValue> {
    check_measures(r1, r2, "ball_pair")?;
    check_exponent(d)?;
    Ok(BoundValue::from_log(
        d * (4.0 * r1 / r2).ln(),
        "ball_pair",
        vec![("R1", r1), ("R2", r2), ("d", d)],
    ))
}

/// Zero-count bounds for a univariate restriction of a quasipolynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeBound {
    /// `m + (2/pi)(sqrt(k+1) + 1) 16 M`
    pub fine: f64,
    /// `32 (sqrt(k+1) M + m)`
    pub coarse: f64,
    pub k: u32,
    pub m: u32,
    pub spectrum_norm: f64,
}

pub fn quasipoly_zero_bound(k: u32, m: u32, spectrum_norm: f64) -> Result<DegreeBound> {
    if k == 0 {
        return Err(invalid("a quasipolynomial has k >= 1 terms"));
    }
    if !(spectrum_norm >= 0.0) {
        return Err(invalid("spectrum norm must be >= 0"));
    }
    let root = f64::from(k + 1).sqrt();
    let fine = f64::from(m) + (2.0 / PI) * (root + 1.0) * 16.0 * spectrum_norm;
    let coarse = 32.0 * (root * spectrum_norm + f64::from(m));
    debug_assert!(fine <= coarse);
    Ok(DegreeBound {
        fine,
        coarse,
        k,
        m,
        spectrum_norm,
    })
}

/// `c (sqrt(k+1) M + m)`; the structural constant `c` is a parameter.
pub fn quasipoly_degree_bound(k: u32, m: u32, spectrum_norm: f64, c: f64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("a quasipolynomial has k >= 1 terms"));
    }
    if !(spectrum_norm >= 0.0 && c > 0.0) {
        return Err(invalid("need M >= 0 and c > 0"));
    }
    Ok(c * (f64::from(k + 1).sqrt() * spectrum_norm + f64::from(m)))
}

/// Upper bound on the distribution function `|{x in V : |f(x)| <= t}|`.
pub fn distribution_bound(t: f64, sup_norm: f64, d: f64, n: u32, vol_v: f64) -> Result<f64> {
    if !(t >= 0.0 && sup_norm > 0.0 && d > 0.0 && vol_v > 0.0) {
        return Err(invalid("need t >= 0, sup > 0, d > 0, |V| > 0"));
    }
    Ok(vol_v.min(4.0 * f64::from(n) * vol_v * (t / sup_norm).powf(1.0 / d)))
}

/// `d (1 + ln 4n)`: the layer-cake integral of [`distribution_bound`],
/// `int_0^inf min(1, 4n e^{-u/d}) du`.
pub fn logbmo_bound(d: f64, n: u32) -> Result<f64> {
    if !(d > 0.0) || n == 0 {
        return Err(invalid("need d > 0 and n >= 1"));
    }
    Ok(d * (1.0 + (4.0 * f64::from(n)).ln()))
}

/// Degree bounds for structural operations on functions, up to a constant `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Structural {
    /// `phi o f` with `phi` of valency `k`.
    Composition {
        k: f64,
        v_f: f64,
    },
    /// `1/h` for `h = e^g`.
    Reciprocal {
        v_h: f64,
    },
    Product {
        v_f: f64,
        v_g: f64,
    },
    /// `m`-th directional derivatives of valency at most `big_m`.
    Rolle {
        m: f64,
        big_m: f64,
    },
}

pub fn structural_degree_bound(kind: Structural, c: f64) -> Result<f64> {
    let (inputs, value) = match kind {
        Structural::Composition { k, v_f } => (vec![k, v_f], k * v_f),
        Structural::Reciprocal { v_h } => (vec![v_h], v_h),
        Structural::Product { v_f, v_g } => (vec![v_f, v_g], v_f + v_g),
        Structural::Rolle { m, big_m } => (vec![m, big_m], m + big_m),
    };
    if inputs.iter().any(|x| !(*x >= 0.0)) || !(c > 0.0) {
        return Err(invalid("structural bound inputs must be >= 0 and c > 0"));
    }
    Ok(c * value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bg_examples() {
        assert_eq!(bg_bound(5, 3, 1.0).unwrap().value, 1.0);
        assert!((bg_bound(1, 1, 0.5).unwrap().value - 3.0).abs() < 1e-12);
        assert!(bg_bound(3, 2, 0.2).unwrap().value > bg_bound(3, 2, 0.5).unwrap().value);
        assert!(bg_bound(1, 1, 0.0).is_err());
        assert!(bg_bound(1, 1, 1.5).is_err());
    }

    #[test]
    fn simplified_examples() {
        assert_eq!(bg_simplified(0, 3, 2.0, 1.0).unwrap().value, 1.0);
        assert!((bg_simplified(2, 1, 2.0, 1.0).unwrap().value - 64.0).abs() < 1e-12);
        assert!(bg_simplified(1, 1, 1.0, 0.0).is_err());
        assert!(bg_simplified(1, 1, 1.0, -1.0).is_err());
    }

    #[test]
    fn remez_examples() {
        assert_eq!(remez_interval_bound(2.0, 1.0, 0.0).unwrap().value, 1.0);
        assert!((remez_interval_bound(1.0, 1.0, 2.0).unwrap().value - 16.0).abs() < 1e-12);
        assert!((remez_interval_bound(2.0, 1.0, 3.0).unwrap().value - 512.0).abs() < 1e-9);
        assert!(remez_interval_bound(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn convex_and_ball_examples() {
        assert_eq!(convex_body_bound(3, 1.0, 0.5, 0.0).unwrap().value, 1.0);
        let a = convex_body_bound(1, 2.0, 0.5, 1.7).unwrap().value;
        let b = remez_interval_bound(2.0, 0.5, 1.7).unwrap().value;
        assert!((a - b).abs() < 1e-12);
        let v = convex_body_bound(2, 3.0, 1.0, 1.5).unwrap().value;
        assert!((v - 24f64.powf(1.5)).abs() < 1e-9);
        assert!((ball_pair_bound(1.0, 1.0, 1.0).unwrap().value - 4.0).abs() < 1e-12);
        assert_eq!(ball_pair_bound(1.0, 0.3, 0.0).unwrap().value, 1.0);
        assert!((ball_pair_bound(5.0, 1.0, 2.0).unwrap().value - 400.0).abs() < 1e-9);
        assert!(ball_pair_bound(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn quasipoly_examples() {
        assert_eq!(quasipoly_zero_bound(2, 7, 0.0).unwrap().fine, 7.0);
        let b = quasipoly_zero_bound(1, 0, 1.0).unwrap();
        // (2/pi)(sqrt 2 + 1) 16 = 24.5907...
        assert!((b.fine - 24.5907).abs() < 1e-3);
        assert!((b.fine - (2.0 / PI) * (2f64.sqrt() + 1.0) * 16.0).abs() < 1e-12);
        assert_eq!(quasipoly_zero_bound(3, 2, 1.0).unwrap().coarse, 128.0);
        assert_eq!(quasipoly_degree_bound(1, 4, 0.0, 1.0).unwrap(), 4.0);
        assert!(quasipoly_degree_bound(0, 1, 1.0, 1.0).is_err());
        assert_eq!(quasipoly_degree_bound(3, 1, 2.0, 1.0).unwrap(), 5.0);
    }

    #[test]
    fn fine_below_coarse_on_grid() {
        for k in 1..=100 {
            for m in 0..=100 {
                for big_m in 0..=100 {
                    if m == 0 && big_m == 0 {
                        continue;
                    }
                    let b = quasipoly_zero_bound(k, m, f64::from(big_m)).unwrap();
                    assert!(b.fine < b.coarse, "k={k} m={m} M={big_m}");
                }
            }
        }
    }

    #[test]
    fn distribution_examples() {
        assert_eq!(distribution_bound(2.0, 2.0, 1.5, 1, 3.0).unwrap(), 3.0);
        assert_eq!(distribution_bound(0.0, 2.0, 1.5, 1, 3.0).unwrap(), 0.0);
        assert!((distribution_bound(1.0, 8.0, 1.0, 1, 2.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn logbmo_matches_layer_cake_quadrature() {
        // int_0^inf min(1, 4n e^{-u/d}) du by the midpoint rule
        for (d, n) in [(1.0, 1), (2.0, 2), (0.7, 3)] {
            let du = 1e-4;
            let quad: f64 = (0..400_000)
                .map(|i| (4.0 * f64::from(n) * (-(i as f64 + 0.5) * du / d).exp()).min(1.0) * du)
                .sum();
            assert!(
                (logbmo_bound(d, n).unwrap() - quad).abs() < 1e-6,
                "d={d} n={n}"
            );
        }
        assert!((logbmo_bound(1.0, 1).unwrap() - 2.386_294_361).abs() < 1e-8);
        assert!((logbmo_bound(2.0, 2).unwrap() - 2.0 * (1.0 + 8f64.ln())).abs() < 1e-12);
        assert!(
            (logbmo_bound(3.0, 2).unwrap() - 1.5 * logbmo_bound(2.0, 2).unwrap()).abs() < 1e-12
        );
    }

    #[test]
    fn structural_examples() {
        let c = 1.7;
        assert_eq!(
            structural_degree_bound(Structural::Composition { k: 1.0, v_f: 3.0 }, c).unwrap(),
            c * 3.0
        );
        assert_eq!(
            structural_degree_bound(Structural::Product { v_f: 3.0, v_g: 0.0 }, c).unwrap(),
            c * 3.0
        );
        assert_eq!(
            structural_degree_bound(Structural::Rolle { m: 2.0, big_m: 3.0 }, 1.0).unwrap(),
            5.0
        );
        assert_eq!(
            structural_degree_bound(Structural::Reciprocal { v_h: 2.0 }, 1.0).unwrap(),
            2.0
        );
        assert!(structural_degree_bound(
            Structural::Product {
                v_f: -1.0,
                v_g: 0.0
            },
            1.0
        )
        .is_err());
    }
}
