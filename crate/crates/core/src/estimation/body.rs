use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::RngExt;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::intervals::IntervalUnion;
use crate::error::{invalid, Error, Result};
use crate::rng::{stream, SeededRng};

const CONTAIN_TOL: f64 = 1e-12;

/// A measurable set in `R^n` with exact volume and a uniform sampler.
pub trait Region: Sync {
    fn dim(&self) -> usize;
    fn contains(&self, x: &[f64]) -> bool;
    fn volume(&self) -> f64;
    fn sample(&self, rng: &mut SeededRng) -> Vec<f64>;
    /// Points worth probing when maximizing (corners, vertices).
    fn extreme_points(&self) -> Vec<Vec<f64>> {
        Vec::new()
    }
    /// Diameter-scale length used for local search steps.
    fn scale(&self) -> f64;
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Volume of the unit ball of `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_n = 2 pi / n V_{n-2}
    let (mut even, mut odd) = (1.0, 2.0);
    for k in 2..=n {
        if k % 2 == 0 {
            even *= 2.0 * PI / k as f64;
        } else {
            odd *= 2.0 * PI / k as f64;
        }
    }
    if n.is_multiple_of(2) {
        even
    } else {
        odd
    }
}

#[derive(Debug, Clone, PartialEq)]
struct SimplexData {
    vertices: Vec<Vec<f64>>,
    /// Rows map `x - v_0` to barycentric coordinates `1..=n`.
    inverse: DMatrix<f64>,
    volume: f64,
}

impl SimplexData {
    fn barycentric(&self, x: &[f64]) -> Vec<f64> {
        let v0 = &self.vertices[0];
        let d = DVector::from_iterator(x.len(), x.iter().zip(v0).map(|(a, b)| a - b));
        let l = &self.inverse * d;
        let mut out = Vec::with_capacity(x.len() + 1);
        out.push(1.0 - l.sum());
        out.extend(l.iter());
        out
    }

    /// Change of the barycentric coordinates along `u`.
    fn barycentric_rate(&self, u: &[f64]) -> Vec<f64> {
        let l = &self.inverse * DVector::from_column_slice(u);
        let mut out = Vec::with_capacity(u.len() + 1);
        out.push(-l.sum());
        out.extend(l.iter());
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Simplex(SimplexData),
}

/// A ball, box or simplex inside the real unit ball `B(0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    shape: Shape,
}

/// Serializable description of a body.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum BodyDescription {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Simplex { vertices: Vec<Vec<f64>> },
}

impl ConvexBody {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !(radius > 0.0) || center.iter().any(|c| !c.is_finite()) {
            return Err(invalid("ball needs a finite center and a positive radius"));
        }
        if norm(&center) + radius > 1.0 + CONTAIN_TOL {
            return Err(invalid(format!(
                "ball of radius {radius} at distance {} leaves B(0,1)",
                norm(&center)
            )));
        }
        Ok(Self {
            shape: Shape::Ball { center, radius },
        })
    }

    pub fn cube(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(invalid("box corners must have the same positive dimension"));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite())
        {
            return Err(invalid("box needs lo < hi in every coordinate"));
        }
        let far: f64 = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| a.abs().max(b.abs()).powi(2))
            .sum::<f64>()
            .sqrt();
        if far > 1.0 + CONTAIN_TOL {
            return Err(invalid(format!(
                "box corner at distance {far} leaves B(0,1)"
            )));
        }
        Ok(Self {
            shape: Shape::Box { lo, hi },
        })
    }

    /// Centered cube `[-a, a]^n` with `a = side_fraction / sqrt(n)`.
    pub fn centered_cube(n: usize, side_fraction: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension must be positive"));
        }
        let a = side_fraction / (n as f64).sqrt();
        Self::cube(vec![-a; n], vec![a; n])
    }

    pub fn simplex(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.first().map_or(0, Vec::len);
        if n == 0 || vertices.len() != n + 1 || vertices.iter().any(|v| v.len() != n) {
            return Err(invalid("a simplex in R^n needs n + 1 vertices of length n"));
        }
        if let Some(v) = vertices.iter().find(|v| norm(v) > 1.0 + CONTAIN_TOL) {
            return Err(invalid(format!(
                "simplex vertex at distance {} leaves B(0,1)",
                norm(v)
            )));
        }
        let edges = DMatrix::from_fn(n, n, |i, j| vertices[j + 1][i] - vertices[0][i]);
        let det = edges.determinant();
        let factorial: f64 = (1..=n).map(|k| k as f64).product();
        let volume = det.abs() / factorial;
        if !(volume > 1e-14) {
            return Err(Error::Degenerate("simplex has zero volume".into()));
        }
        let inverse = edges
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("simplex edge matrix is singular".into()))?;
        Ok(Self {
            shape: Shape::Simplex(SimplexData {
                vertices,
                inverse,
                volume,
            }),
        })
    }

    pub fn describe(&self) -> BodyDescription {
        match &self.shape {
            Shape::Ball { center, radius } => BodyDescription::Ball {
                center: center.clone(),
                radius: *radius,
            },
            Shape::Box { lo, hi } => BodyDescription::Box {
                lo: lo.clone(),
                hi: hi.clone(),
            },
            Shape::Simplex(s) => BodyDescription::Simplex {
                vertices: s.vertices.clone(),
            },
        }
    }

    pub fn shape_name(&self) -> &'static str {
        match self.shape {
            Shape::Ball { .. } => "ball",
            Shape::Box { .. } => "box",
            Shape::Simplex(_) => "simplex",
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match self.shape {
            Shape::Ball { radius, .. } => Some(radius),
            _ => None,
        }
    }

    /// A point in the interior.
    pub fn center(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Ball { center, .. } => center.clone(),
            Shape::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| (a + b) / 2.0).collect(),
            Shape::Simplex(s) => {
                let k = s.vertices.len() as f64;
                (0..s.vertices[0].len())
                    .map(|i| s.vertices.iter().map(|v| v[i]).sum::<f64>() / k)
                    .collect()
            }
        }
    }

    /// Largest `t >= 0` with `x + t u` in the body, for `x` in the body.
    pub fn ray_exit(&self, x: &[f64], u: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => {
                // |x - c + t u|^2 = r^2
                let d: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let uu: f64 = u.iter().map(|v| v * v).sum();
                let b: f64 = d.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() / uu;
                let c = (d.iter().map(|v| v * v).sum::<f64>() - radius * radius) / uu;
                (-b + (b * b - c).max(0.0).sqrt()).max(0.0)
            }
            Shape::Box { lo, hi } => {
                let mut t = f64::INFINITY;
                for i in 0..x.len() {
                    if u[i] > 0.0 {
                        t = t.min((hi[i] - x[i]) / u[i]);
                    } else if u[i] < 0.0 {
                        t = t.min((lo[i] - x[i]) / u[i]);
                    }
                }
                t.max(0.0)
            }
            Shape::Simplex(s) => {
                let l = s.barycentric(x);
                let dl = s.barycentric_rate(u);
                let mut t = f64::INFINITY;
                for (li, di) in l.iter().zip(&dl) {
                    if *di < 0.0 {
                        t = t.min(-li.max(0.0) / di);
                    }
                }
                t.max(0.0)
            }
        }
    }

    /// Whether the closed ball `B(c, r)` lies in the body.
    fn contains_ball(&self, c: &[f64], r: f64) -> bool {
        match &self.shape {
            Shape::Ball { center, radius } => {
                let d: Vec<f64> = c.iter().zip(center).map(|(a, b)| a - b).collect();
                norm(&d) + r <= radius + CONTAIN_TOL
            }
            Shape::Box { lo, hi } => c
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(x, (a, b))| x - r >= a - CONTAIN_TOL && x + r <= b + CONTAIN_TOL),
            Shape::Simplex(s) => {
                // facet i: lambda_i(x) >= 0, with gradient row i of the map
                let l = s.barycentric(c);
                let n = c.len();
                (0..=n).all(|i| {
                    let grad_norm = if i == 0 {
                        (0..n)
                            .map(|j| s.inverse.column(j).sum().powi(2))
                            .sum::<f64>()
                            .sqrt()
                    } else {
                        s.inverse.row(i - 1).norm()
                    };
                    l[i] - r * grad_norm >= -CONTAIN_TOL
                })
            }
        }
    }

    /// Whether `other` lies in this body (exact for all shape pairs).
    pub fn contains_body(&self, other: &ConvexBody) -> bool {
        match &other.shape {
            Shape::Ball { center, radius } => self.contains_ball(center, *radius),
            _ => other.extreme_points().iter().all(|p| self.contains(p)),
        }
    }
}

fn box_corners(lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let n = lo.len();
    if n > 12 {
        return Vec::new();
    }
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                .collect()
        })
        .collect()
}

fn gaussian_unit(n: usize, rng: &mut SeededRng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let len = norm(&g);
        if len > 1e-12 {
            return g.into_iter().map(|v| v / len).collect();
        }
    }
}

impl Region for ConvexBody {
    fn dim(&self) -> usize {
        match &self.shape {
            Shape::Ball { center, .. } => center.len(),
            Shape::Box { lo, .. } => lo.len(),
            Shape::Simplex(s) => s.vertices[0].len(),
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        match &self.shape {
            Shape::Ball { center, radius } => {
                let d: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                norm(&d) <= radius * (1.0 + CONTAIN_TOL)
            }
            Shape::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (a, b))| *a - CONTAIN_TOL <= *v && *v <= *b + CONTAIN_TOL),
            Shape::Simplex(s) => s.barycentric(x).iter().all(|l| *l >= -CONTAIN_TOL),
        }
    }

    fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => {
                unit_ball_volume(center.len()) * radius.powi(center.len() as i32)
            }
            Shape::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| b - a).product(),
            Shape::Simplex(s) => s.volume,
        }
    }

    fn sample(&self, rng: &mut SeededRng) -> Vec<f64> {
        match &self.shape {
            Shape::Ball { center, radius } => {
                let n = center.len();
                let dir = gaussian_unit(n, rng);
                let rho = radius * rng.random::<f64>().powf(1.0 / n as f64);
                center.iter().zip(dir).map(|(c, d)| c + rho * d).collect()
            }
            Shape::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| a + rng.random::<f64>() * (b - a))
                .collect(),
            Shape::Simplex(s) => {
                // flat Dirichlet weights give the uniform distribution
                let e: Vec<f64> = s
                    .vertices
                    .iter()
                    .map(|_| -(1.0 - rng.random::<f64>()).ln())
                    .collect();
                let total: f64 = e.iter().sum();
                let n = s.vertices[0].len();
                (0..n)
                    .map(|i| {
                        s.vertices
                            .iter()
                            .zip(&e)
                            .map(|(v, w)| v[i] * w)
                            .sum::<f64>()
                            / total
                    })
                    .collect()
            }
        }
    }

    fn extreme_points(&self) -> Vec<Vec<f64>> {
        match &self.shape {
            Shape::Ball { .. } => Vec::new(),
            Shape::Box { lo, hi } => box_corners(lo, hi),
            Shape::Simplex(s) => s.vertices.clone(),
        }
    }

    fn scale(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Box { lo, hi } => {
                let d: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| b - a).collect();
                norm(&d)
            }
            Shape::Simplex(s) => {
                let mut m: f64 = 0.0;
                for a in &s.vertices {
                    for b in &s.vertices {
                        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                        m = m.max(norm(&d));
                    }
                }
                m
            }
        }
    }
}

/// Product `A_1 x ... x A_n` of interval unions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSet {
    factors: Vec<IntervalUnion>,
}

impl ProductSet {
    pub fn new(factors: Vec<IntervalUnion>) -> Result<Self> {
        if factors.is_empty() {
            return Err(invalid("product set needs at least one factor"));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[IntervalUnion] {
        &self.factors
    }

    /// Random product of unions inside the box `[lo, hi]` with volume
    /// fraction `lambda`, split evenly across coordinates.
    pub fn random_in_box(lo: &[f64], hi: &[f64], lambda: f64, rng: &mut SeededRng) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(invalid(format!("lambda = {lambda} must lie in (0, 1]")));
        }
        let ratio = lambda.powf(1.0 / lo.len() as f64);
        let factors = lo
            .iter()
            .zip(hi)
            .map(|(&a, &b)| {
                let pieces = rng.random_range(1..=3);
                IntervalUnion::random_subset(a, b, ratio, pieces, rng)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    /// Whether the product lies in `body` (checked on its bounding box).
    pub fn within(&self, body: &ConvexBody) -> bool {
        let lo: Vec<f64> = self.factors.iter().map(IntervalUnion::lo).collect();
        let hi: Vec<f64> = self.factors.iter().map(IntervalUnion::hi).collect();
        box_corners(&lo, &hi).iter().all(|p| body.contains(p))
    }
}

impl Region for ProductSet {
    fn dim(&self) -> usize {
        self.factors.len()
    }

    fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.factors).all(|(v, f)| f.contains(*v))
    }

    fn volume(&self) -> f64 {
        self.factors.iter().map(IntervalUnion::measure).product()
    }

    fn sample(&self, rng: &mut SeededRng) -> Vec<f64> {
        self.factors
            .iter()
            .map(|f| {
                let mut u = rng.random::<f64>() * f.measure();
                for &(lo, hi) in f.pieces() {
                    if u <= hi - lo {
                        return lo + u;
                    }
                    u -= hi - lo;
                }
                f.hi()
            })
            .collect()
    }

    fn extreme_points(&self) -> Vec<Vec<f64>> {
        // corners of every box piece combination, when few
        let count: usize = self.factors.iter().map(|f| f.pieces().len()).product();
        if count > 64 || self.factors.len() > 6 {
            return Vec::new();
        }
        let mut points = vec![Vec::new()];
        for f in &self.factors {
            let ends: Vec<f64> = f.pieces().iter().flat_map(|&(a, b)| [a, b]).collect();
            points = points
                .into_iter()
                .flat_map(|p| {
                    ends.iter().map(move |&e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        points
    }

    fn scale(&self) -> f64 {
        let d: Vec<f64> = self.factors.iter().map(|f| f.hi() - f.lo()).collect();
        norm(&d)
    }
}

/// Ray chosen by [`select_ray`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RaySelection {
    pub origin: Vec<f64>,
    pub direction: Vec<f64>,
    /// `mes_1(l cap V)`.
    pub length_in_body: f64,
    /// `mes_1(l cap omega)`, by a midpoint scan.
    pub length_in_subset: f64,
    pub ratio: f64,
    /// `n |V| / |omega|`.
    pub bound: f64,
    pub certified: bool,
    pub n_directions: usize,
}

const RAY_SCAN: usize = 2048;

/// Among `n_dirs` sampled directions (plus the coordinate directions),
/// the ray from `x` minimizing `mes_1(l cap V) / mes_1(l cap omega)`.
pub fn select_ray(
    body: &ConvexBody,
    omega: &dyn Region,
    x: &[f64],
    n_dirs: usize,
    seed: u64,
) -> Result<RaySelection> {
    let n = body.dim();
    if x.len() != n || omega.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len().min(omega.dim()),
        });
    }
    if !body.contains(x) {
        return Err(invalid("ray origin must lie in the body"));
    }
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(2 * n + n_dirs);
    for j in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[j] = s;
            dirs.push(e);
        }
    }
    let mut rng = stream(seed, &[0x4A7]);
    for _ in 0..n_dirs {
        dirs.push(gaussian_unit(n, &mut rng));
    }
    let mut best: Option<(usize, f64, f64, f64)> = None;
    for (k, u) in dirs.iter().enumerate() {
        let len = body.ray_exit(x, u);
        if !(len > 0.0) {
            continue;
        }
        let h = len / RAY_SCAN as f64;
        let hits = (0..RAY_SCAN)
            .filter(|&i| {
                let t = (i as f64 + 0.5) * h;
                let p: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + t * b).collect();
                omega.contains(&p)
            })
            .count();
        if hits == 0 {
            continue;
        }
        let inside = hits as f64 * h;
        let ratio = len / inside;
        if best.is_none_or(|(_, _, _, r)| ratio < r) {
            best = Some((k, len, inside, ratio));
        }
    }
    let Some((k, len, inside, ratio)) = best else {
        return Err(Error::Degenerate(
            "no sampled ray meets the subset; resample directions or the origin".into(),
        ));
    };
    let bound = n as f64 * body.volume() / omega.volume();
    Ok(RaySelection {
        origin: x.to_vec(),
        direction: dirs[k].clone(),
        length_in_body: len,
        length_in_subset: inside,
        ratio,
        bound,
        certified: ratio <= bound,
        n_directions: dirs.len(),
    })
}
