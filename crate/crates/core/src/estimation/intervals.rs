use rand::{Rng, RngExt};
use serde::Serialize;

use crate::error::{invalid, Result};

/// A finite union of disjoint closed intervals, sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalUnion {
    pieces: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new(mut pieces: Vec<(f64, f64)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(invalid("interval union must have at least one piece"));
        }
        for &(lo, hi) in &pieces {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(invalid(format!("bad piece [{lo}, {hi}]")));
            }
        }
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pieces.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(invalid(format!(
                    "pieces [{}, {}] and [{}, {}] overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Self { pieces })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn measure(&self) -> f64 {
        self.pieces.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn lo(&self) -> f64 {
        self.pieces[0].0
    }

    pub fn hi(&self) -> f64 {
        self.pieces[self.pieces.len() - 1].1
    }

    pub fn contains(&self, t: f64) -> bool {
        self.pieces.iter().any(|&(lo, hi)| lo <= t && t <= hi)
    }

    pub fn within(&self, lo: f64, hi: f64) -> bool {
        lo <= self.lo() && self.hi() <= hi
    }

    /// Measure of the intersection with `[lo, hi]`.
    pub fn overlap(&self, lo: f64, hi: f64) -> f64 {
        self.pieces
            .iter()
            .map(|&(a, b)| (b.min(hi) - a.max(lo)).max(0.0))
            .sum()
    }

    /// Random subset of `[lo, hi]` made of `n_pieces` intervals of total
    /// length `ratio * (hi - lo)`.
    ///
    /// Piece lengths and the `n_pieces + 1` gaps are uniform on their
    /// simplices (normalized exponentials).
    pub fn random_subset<R: Rng + ?Sized>(
        lo: f64,
        hi: f64,
        ratio: f64,
        n_pieces: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if !(lo < hi) || !(ratio > 0.0 && ratio <= 1.0) || n_pieces == 0 {
            return Err(invalid(format!(
                "random_subset needs lo < hi, ratio in (0, 1], n_pieces >= 1 (got [{lo}, {hi}], {ratio}, {n_pieces})"
            )));
        }
        if ratio == 1.0 {
            return Self::interval(lo, hi);
        }
        let mut exp_draws = |n: usize| -> Vec<f64> {
            let e: Vec<f64> = (0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    (-(1.0 - u).ln()).max(1e-6)
                })
                .collect();
            let total: f64 = e.iter().sum();
            e.into_iter().map(|x| x / total).collect()
        };
        let len = hi - lo;
        let lengths = exp_draws(n_pieces);
        let gaps = exp_draws(n_pieces + 1);
        let mut pieces = Vec::with_capacity(n_pieces);
        let mut t = lo;
        for i in 0..n_pieces {
            t += gaps[i] * (1.0 - ratio) * len;
            let a = t;
            t += lengths[i] * ratio * len;
            pieces.push((a, t.min(hi)));
        }
        Self::new(pieces)
    }
}
