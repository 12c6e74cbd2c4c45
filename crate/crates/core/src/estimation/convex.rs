use super::body::{select_ray, ConvexBody, Region};
use super::distribution::McSample;
use super::report::{inputs, VerificationReport};
use crate::bounds::{ball_pair_bound, bg_bound, bg_simplified, convex_body_bound};
use crate::error::{invalid, Result};
use crate::function::{AnalyticExpr, MultiPoly};
use crate::rng::derive_seed;

/// Directions tried by the ray search that accompanies each convex check.
const RAY_DIRECTIONS: usize = 64;

/// `sup_V |f|` and `sup_omega |f|` by Monte Carlo with refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct SupPair {
    pub sup_body: f64,
    pub sup_subset: f64,
    pub argmax: Vec<f64>,
}

pub fn sup_pair(
    f: &AnalyticExpr,
    body: &dyn Region,
    omega: &dyn Region,
    n_mc: usize,
    seed: u64,
) -> Result<SupPair> {
    let a = McSample::new(f, body, n_mc, derive_seed(seed, &[0xA]))?;
    let b = McSample::new(f, omega, n_mc, derive_seed(seed, &[0xB]))?;
    Ok(SupPair {
        sup_body: a.refined_sup(f, body)?,
        sup_subset: b.refined_sup(f, omega)?,
        argmax: a.argmax_point().to_vec(),
    })
}

fn check_subset(body: &dyn Region, omega: &dyn Region) -> Result<()> {
    if body.dim() != omega.dim() {
        return Err(invalid("body and subset dimensions differ"));
    }
    if !(omega.volume() > 0.0) || omega.volume() > body.volume() * (1.0 + 1e-12) {
        return Err(invalid(
            "subset volume must be positive and at most the body volume",
        ));
    }
    Ok(())
}

/// `sup_V |f| <= (4 n |V| / |omega|)^d sup_omega |f|`, with the ray of the
/// one-dimensional reduction recorded in the inputs.
pub fn verify_convex_body(
    f: &AnalyticExpr,
    body: &ConvexBody,
    omega: &dyn Region,
    d: f64,
    n_mc: usize,
    slack: f64,
    seed: u64,
) -> Result<VerificationReport> {
    check_subset(body, omega)?;
    let n = body.dim();
    let sups = sup_pair(f, body, omega, n_mc, seed)?;
    let bound = convex_body_bound(n as u32, body.volume(), omega.volume(), d)?;
    let mut map = inputs([
        ("n", n as f64),
        ("d", d),
        ("vol_V", body.volume()),
        ("vol_omega", omega.volume()),
        ("sup_omega", sups.sup_subset),
    ]);
    let mut note = None;
    match select_ray(
        body,
        omega,
        &sups.argmax,
        RAY_DIRECTIONS,
        derive_seed(seed, &[0xC]),
    ) {
        Ok(ray) => {
            map.insert("ray_ratio".into(), ray.ratio);
            map.insert("ray_bound".into(), ray.bound);
            map.insert(
                "ray_certified".into(),
                if ray.certified { 1.0 } else { 0.0 },
            );
        }
        Err(e) => note = Some(format!("ray search: {e}")),
    }
    let rhs = bound.value * sups.sup_subset;
    let rep = VerificationReport::compare(
        format!("convex.{}", body.shape_name()),
        seed,
        map,
        sups.sup_body,
        rhs,
        slack,
    );
    Ok(match note {
        Some(n) => rep.with_note(n),
        None => rep,
    })
}

/// Concentric-or-not ball pair `B(c2, R2) in B(c1, R1)`: the convex bound
/// and `(4 R1 / R2)^d`, one report each.
pub fn verify_ball_pair(
    f: &AnalyticExpr,
    outer: &ConvexBody,
    inner: &ConvexBody,
    d: f64,
    n_mc: usize,
    slack: f64,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let (Some(r1), Some(r2)) = (outer.radius(), inner.radius()) else {
        return Err(invalid("ball pair needs two balls"));
    };
    if !outer.contains_body(inner) {
        return Err(invalid("inner ball must lie in the outer ball"));
    }
    let sups = sup_pair(f, outer, inner, n_mc, seed)?;
    let n = outer.dim() as u32;
    let convex = convex_body_bound(n, outer.volume(), inner.volume(), d)?;
    let pair = ball_pair_bound(r1, r2, d)?;
    let base = || {
        inputs([
            ("R1", r1),
            ("R2", r2),
            ("d", d),
            ("sup_inner", sups.sup_subset),
        ])
    };
    Ok(vec![
        VerificationReport::compare(
            "ballpair.convex",
            seed,
            base(),
            sups.sup_body,
            convex.value * sups.sup_subset,
            slack,
        ),
        VerificationReport::compare(
            "ballpair.radius",
            seed,
            base(),
            sups.sup_body,
            pair.value * sups.sup_subset,
            slack,
        ),
    ])
}

/// Brudnyi–Ganzburg for a polynomial: `sup_V |p| <= T_k(...) sup_omega |p|`,
/// plus a report that the simplified constant dominates the sharp one.
pub fn verify_brudnyi_ganzburg(
    p: &MultiPoly,
    body: &ConvexBody,
    omega: &dyn Region,
    n_mc: usize,
    slack: f64,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    check_subset(body, omega)?;
    let f = AnalyticExpr::Poly(p.clone());
    let n = body.dim() as u32;
    let k = p.degree();
    let lambda = (omega.volume() / body.volume()).min(1.0);
    let sups = sup_pair(&f, body, omega, n_mc, seed)?;
    let sharp = bg_bound(k, n, lambda)?;
    let simple = bg_simplified(k, n, body.volume(), omega.volume())?;
    let base = || {
        inputs([
            ("k", f64::from(k)),
            ("n", f64::from(n)),
            ("lambda", lambda),
            ("sup_omega", sups.sup_subset),
        ])
    };
    Ok(vec![
        VerificationReport::compare(
            "bg",
            seed,
            base(),
            sups.sup_body,
            sharp.value * sups.sup_subset,
            slack,
        ),
        VerificationReport::new(
            "bg.simplified_dominates",
            seed,
            base(),
            sharp.log_value,
            simple.log_value,
            sharp.log_value <= simple.log_value + 1e-12,
            0.0,
        ),
    ])
}
