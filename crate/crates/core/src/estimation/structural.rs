use num_complex::Complex64;
use rand::RngExt;
use rayon::prelude::*;
use serde::Serialize;

use super::composition::complex_ball_sup;
use super::degree::{empirical_chebyshev_degree, DegreeConfig};
use super::report::{inputs, VerificationReport};
use crate::analysis::{
    is_constant, line_family, valency_at_targets, valency_frame, valency_global, valency_on_disk,
    valency_targets, ValencyConfig,
};
use crate::error::{invalid, Result};
use crate::function::{AnalyticExpr, ComplexVector, MultiPoly, UniPoly};
use crate::rng::{derive_seed, stream};

/// Sampling effort shared by the structural checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralSettings {
    pub degree: DegreeConfig,
    pub n_lines: usize,
    pub valency: ValencyConfig,
    /// Headroom on the frozen constant: pass iff `lhs <= c (...) (1 + slack)`.
    pub slack: f64,
}

impl Default for StructuralSettings {
    fn default() -> Self {
        Self {
            degree: DegreeConfig::default(),
            n_lines: 8,
            valency: ValencyConfig::default(),
            slack: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationMember {
    pub label: String,
    pub d_emp: f64,
    pub valency: usize,
    pub degree: u32,
}

/// Constants fitted on the reference family and frozen for one `r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    /// `max d_emp / v((1 + r)/2)`.
    pub c: f64,
    /// `max d_emp / (1 + deg)`, the constant for quasipolynomial degrees.
    pub c_degree: f64,
    pub r: f64,
    pub members: Vec<CalibrationMember>,
}

fn real_poly(terms: &[(&[u32], f64)]) -> MultiPoly {
    MultiPoly::new(
        2,
        terms
            .iter()
            .map(|(e, c)| (e.to_vec(), Complex64::new(*c, 0.0))),
    )
    .expect("valid reference polynomial")
}

fn random_real_poly(dim: usize, degree: u32, seed: u64) -> MultiPoly {
    let mut rng = stream(seed, &[0xCA1]);
    let mut terms = Vec::new();
    for total in 0..=degree {
        for i in 0..=total {
            if dim == 1 && i > 0 {
                break;
            }
            let mut e = vec![0u32; dim];
            e[0] = total - i;
            if dim > 1 {
                e[1] = i;
            }
            terms.push((e, Complex64::new(rng.random_range(-1.0..1.0), 0.0)));
        }
    }
    MultiPoly::new(dim, terms).expect("valid random polynomial")
}

/// Frozen polynomial family in two variables used to fit the constants.
pub fn reference_family() -> Vec<(String, MultiPoly)> {
    let mut family = vec![
        ("z1".to_string(), real_poly(&[(&[1, 0], 1.0)])),
        ("z1^2".to_string(), real_poly(&[(&[2, 0], 1.0)])),
        ("z1^3".to_string(), real_poly(&[(&[3, 0], 1.0)])),
        ("z1 z2".to_string(), real_poly(&[(&[1, 1], 1.0)])),
        (
            "z1^2 - z2^2".to_string(),
            real_poly(&[(&[2, 0], 1.0), (&[0, 2], -1.0)]),
        ),
        (
            "T2(z1)".to_string(),
            real_poly(&[(&[2, 0], 2.0), (&[0, 0], -1.0)]),
        ),
        (
            "T3(z1)".to_string(),
            real_poly(&[(&[3, 0], 4.0), (&[1, 0], -3.0)]),
        ),
        (
            "T4(z1)".to_string(),
            real_poly(&[(&[4, 0], 8.0), (&[2, 0], -8.0), (&[0, 0], 1.0)]),
        ),
    ];
    for (i, deg) in [2u32, 3, 4].into_iter().enumerate() {
        family.push((
            format!("random{i}(deg {deg})"),
            random_real_poly(2, deg, 100 + i as u64),
        ));
    }
    family
}

/// Fits `c` and `c_degree` on [`reference_family`].
pub fn calibrate(r: f64, settings: &StructuralSettings, seed: u64) -> Result<Calibration> {
    let t = (1.0 + r) / 2.0;
    let members: Vec<Result<CalibrationMember>> = reference_family()
        .into_par_iter()
        .enumerate()
        .map(|(i, (label, p))| {
            let f = AnalyticExpr::Poly(p.clone());
            let e = empirical_chebyshev_degree(
                &f,
                r,
                &settings.degree,
                derive_seed(seed, &[0xCA, i as u64]),
            )?;
            let v = valency_global(
                &f,
                t,
                r,
                settings.n_lines,
                &settings.valency,
                derive_seed(seed, &[0xCB, i as u64]),
            )?;
            Ok(CalibrationMember {
                label,
                d_emp: e.d_emp,
                valency: v.value,
                degree: p.degree(),
            })
        })
        .collect();
    let members = members.into_iter().collect::<Result<Vec<_>>>()?;
    let c = members
        .iter()
        .filter(|m| m.valency > 0)
        .map(|m| m.d_emp / m.valency as f64)
        .fold(0.0, f64::max);
    let c_degree = members
        .iter()
        .map(|m| m.d_emp / f64::from(1 + m.degree))
        .fold(0.0, f64::max);
    Ok(Calibration {
        c,
        c_degree,
        r,
        members,
    })
}

/// Inputs for [`proposition3_checks`].
#[derive(Debug, Clone)]
pub struct Prop3Input {
    pub f: AnalyticExpr,
    pub g: AnalyticExpr,
    /// Taylor coefficients of `phi` at 0.
    pub phi: Vec<Complex64>,
    /// Direction `a` of the operator `(a, D)`.
    pub direction: ComplexVector,
    pub m: u32,
}

/// Valencies of `h` and `1/h` on the same lines, counting `h = w` and
/// `1/h = 1/w` for the same targets `w`.
pub fn reciprocal_valencies(
    h: &AnalyticExpr,
    recip: &AnalyticExpr,
    t: f64,
    r: f64,
    n_lines: usize,
    cfg: &ValencyConfig,
    seed: u64,
) -> Result<(usize, usize)> {
    if !(1.0 <= t && t < r) {
        return Err(invalid(format!("need 1 <= t < r, got t = {t}, r = {r}")));
    }
    let s = valency_frame(t, r);
    let lines = line_family(h.dim(), t, s, n_lines, seed)?;
    let pairs: Vec<Result<(usize, usize)>> = lines
        .par_iter()
        .enumerate()
        .map(|(i, line)| {
            let a = line.restrict(h)?;
            let b = line.restrict(recip)?;
            if is_constant(&a, t / s) {
                return Ok((0, 0));
            }
            let mut rng = stream(seed, &[0x5A12, i as u64]);
            let targets: Vec<Complex64> = valency_targets(&a, t / s, cfg, &mut rng)
                .into_iter()
                .filter(|w| w.norm() > 0.0)
                .collect();
            let inverted: Vec<Complex64> = targets.iter().map(|w| w.inv()).collect();
            let va = valency_at_targets(&a, t / s, &targets, cfg)?;
            let vb = valency_at_targets(&b, t / s, &inverted, cfg)?;
            Ok((va.value, vb.value))
        })
        .collect();
    let mut best = (0, 0);
    for p in pairs {
        let (a, b) = p?;
        best = (best.0.max(a), best.1.max(b));
    }
    Ok(best)
}

/// Checks of the composition, reciprocal, product and Rolle bounds with
/// the frozen constant `calib.c`.
pub fn proposition3_checks(
    input: &Prop3Input,
    calib: &Calibration,
    settings: &StructuralSettings,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let r = calib.r;
    let dim = input.f.dim();
    if input.g.dim() != dim || input.direction.dim() != dim {
        return Err(invalid("f, g and the direction must share a dimension"));
    }
    let t = (1.0 + r) / 2.0;
    let c = calib.c;
    let slack = settings.slack;
    let val = |f: &AnalyticExpr, tt: f64, tag: u64| -> Result<usize> {
        Ok(valency_global(
            f,
            tt,
            r,
            settings.n_lines,
            &settings.valency,
            derive_seed(seed, &[tag]),
        )?
        .value)
    };
    let degree = |f: &AnalyticExpr, tag: u64| -> Result<f64> {
        Ok(empirical_chebyshev_degree(f, r, &settings.degree, derive_seed(seed, &[tag]))?.d_emp)
    };
    let v_f = val(&input.f, t, 1)?;
    let v_g = val(&input.g, t, 2)?;
    let mut reports = Vec::new();

    // (a) phi o f with phi of valency k on the closed unit disk
    let phi_poly = UniPoly::new(input.phi.clone());
    let k = valency_on_disk(&phi_poly, 1.0, &settings.valency, &mut stream(seed, &[3]))?.value;
    let sup_f = complex_ball_sup(&input.f, r, 2048, derive_seed(seed, &[4]))?;
    let (inner, scale) = if sup_f < 1.0 - 1e-9 {
        (input.f.clone(), 1.0)
    } else {
        let s = 1.0 / (2.0 * sup_f);
        (
            AnalyticExpr::scale(Complex64::new(s, 0.0), input.f.clone()),
            s,
        )
    };
    let composed = AnalyticExpr::compose(input.phi.clone(), inner)?;
    let d_comp = degree(&composed, 5)?;
    let mut rep = VerificationReport::compare(
        "prop3.composition",
        seed,
        inputs([
            ("c", c),
            ("k", k as f64),
            ("v_f", v_f as f64),
            ("d_emp", d_comp),
            ("f_scale", scale),
        ]),
        d_comp,
        c * k as f64 * v_f as f64,
        slack,
    );
    if scale != 1.0 {
        rep = rep.with_note("f rescaled so that its image lies in the unit disk");
    }
    reports.push(rep);

    // (b) 1/h for h = e^g
    let h = AnalyticExpr::exp(input.g.clone());
    let recip = AnalyticExpr::recip_exp(input.g.clone());
    let (v_h, v_recip) = reciprocal_valencies(
        &h,
        &recip,
        t,
        r,
        settings.n_lines,
        &settings.valency,
        derive_seed(seed, &[6]),
    )?;
    let diff = v_h.abs_diff(v_recip) as f64;
    reports.push(VerificationReport::new(
        "prop3.reciprocal_valency",
        seed,
        inputs([("v_h", v_h as f64), ("v_recip", v_recip as f64)]),
        diff,
        0.0,
        diff == 0.0,
        0.0,
    ));
    let d_recip = degree(&recip, 7)?;
    reports.push(VerificationReport::compare(
        "prop3.reciprocal",
        seed,
        inputs([("c", c), ("v_h", v_h as f64), ("d_emp", d_recip)]),
        d_recip,
        c * v_h as f64,
        slack,
    ));

    // (c) f g
    let product = AnalyticExpr::product(input.f.clone(), input.g.clone())?;
    let d_prod = degree(&product, 8)?;
    reports.push(VerificationReport::compare(
        "prop3.product",
        seed,
        inputs([
            ("c", c),
            ("v_f", v_f as f64),
            ("v_g", v_g as f64),
            ("d_emp", d_prod),
        ]),
        d_prod,
        c * (v_f + v_g) as f64,
        slack,
    ));

    // Rolle: valency of (a, D)^m f on B_c(0, (1 + 3r)/4)
    let deriv =
        AnalyticExpr::directional_derivative(input.direction.clone(), input.m, input.f.clone())?;
    let big_m = val(&deriv, (1.0 + 3.0 * r) / 4.0, 9)?;
    let d_f = degree(&input.f, 10)?;
    reports.push(VerificationReport::compare(
        "prop3.rolle",
        seed,
        inputs([
            ("c", c),
            ("m", f64::from(input.m)),
            ("M", big_m as f64),
            ("d_emp", d_f),
        ]),
        d_f,
        c * (f64::from(input.m) + big_m as f64),
        slack,
    ));
    Ok(reports)
}
