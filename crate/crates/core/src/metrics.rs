//! Front quality indicators and significance tests.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::evaluator::{dominates, Dominance, Objectives};

/// A set of objective vectors from one dataset with `n_features` columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Front {
    pub points: Vec<Objectives>,
    pub n_features: usize,
}

impl Front {
    pub fn new(points: Vec<Objectives>, n_features: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyFront);
        }
        if n_features == 0 {
            return Err(Error::InvalidParameter("front needs n_features >= 1".into()));
        }
        Ok(Self { points, n_features })
    }

    /// Points not dominated by any other point, with exact duplicates removed,
    /// sorted by ascending error.
    pub fn non_dominated(&self) -> Vec<Objectives> {
        let mut keep: Vec<Objectives> = self
            .points
            .iter()
            .filter(|p| {
                !self
                    .points
                    .iter()
                    .any(|q| dominates(q, p) == Dominance::FirstDominates)
            })
            .copied()
            .collect();
        keep.sort_by(|a, b| a.error_pct.total_cmp(&b.error_pct).then(a.n_selected.cmp(&b.n_selected)));
        keep.dedup();
        keep
    }
}

/// Fraction of `p2` weakly dominated (covered) by some point of `p1`.
/// Every point covers itself, so `c_metric(p, p) == 1`.
pub fn c_metric(p1: &Front, p2: &Front) -> Result<f64> {
    if p1.points.is_empty() || p2.points.is_empty() {
        return Err(Error::EmptyFront);
    }
    let covered = p2
        .points
        .iter()
        .filter(|b| p1.points.iter().any(|a| a.covers(b)))
        .count();
    Ok(covered as f64 / p2.points.len() as f64)
}

/// Area dominated by the front inside the unit box, after scaling error by
/// 1/100 and feature count by 1/n (reference point `(100, n)` maps to
/// `(1, 1)`).
///
/// With non-dominated points sorted by ascending scaled error
/// `(e_1, f_1) .. (e_k, f_k)` and `e_{k+1} = 1`, the area is
/// `sum_i (e_{i+1} - e_i) * (1 - f_i)`.
pub fn hypervolume(front: &Front) -> Result<f64> {
    if front.points.is_empty() {
        return Err(Error::EmptyFront);
    }
    let n = front.n_features;
    for p in &front.points {
        if !(0.0..=100.0).contains(&p.error_pct) || p.n_selected > n {
            return Err(Error::OutsideReferenceBox {
                error_pct: p.error_pct,
                n_selected: p.n_selected,
                n_features: n,
            });
        }
    }
    let pts = front.non_dominated();
    // accumulate in (error %, features) units and scale once
    let mut area = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let next = pts.get(i + 1).map_or(100.0, |q| q.error_pct);
        area += (next - p.error_pct) * (n - p.n_selected) as f64;
    }
    Ok(area / (100.0 * n as f64))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Nonzero differences used.
    pub n: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    /// `min(w_plus, w_minus)`.
    pub statistic: f64,
    /// Exact two-sided p-value.
    pub p_value: f64,
}

/// Largest number of nonzero differences handled by exact enumeration.
pub const WILCOXON_EXACT_LIMIT: usize = 20;

/// Midranks (1-based) of `values`, ties sharing the average rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Exact Wilcoxon signed-rank test on paired differences.
///
/// Zero differences are dropped, absolute values ranked with midranks, and
/// the null distribution of the positive-rank sum is counted exactly over all
/// `2^m` sign assignments (a subset-sum count on doubled ranks, so midranks
/// stay integral).
pub fn wilcoxon_exact(diffs: &[f64]) -> Result<WilcoxonResult> {
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::InvalidParameter("differences must be finite".into()));
    }
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    let m = nonzero.len();
    if m == 0 {
        return Err(Error::NoNonzeroDifferences);
    }
    if m > WILCOXON_EXACT_LIMIT {
        return Err(Error::TooManyDifferences(m));
    }
    let abs: Vec<f64> = nonzero.iter().map(|d| d.abs()).collect();
    let ranks = midranks(&abs);
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let w_plus2: usize = doubled.iter().zip(&nonzero).filter(|(_, d)| **d > 0.0).map(|(r, _)| r).sum();
    let total2: usize = doubled.iter().sum();
    let w_minus2 = total2 - w_plus2;
    let stat2 = w_plus2.min(w_minus2);

    let mut counts = vec![0u64; total2 + 1];
    counts[0] = 1;
    for &r in &doubled {
        for s in (r..=total2).rev() {
            counts[s] += counts[s - r];
        }
    }
    let tail: u64 = counts[..=stat2].iter().sum();
    let p = (2.0 * tail as f64 / (1u64 << m) as f64).min(1.0);
    Ok(WilcoxonResult {
        n: m,
        w_plus: w_plus2 as f64 / 2.0,
        w_minus: w_minus2 as f64 / 2.0,
        statistic: stat2 as f64 / 2.0,
        p_value: p,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Mean rank per method; rank 1 is best.
    pub mean_ranks: Vec<f64>,
}

/// Friedman test over `scores[method][dataset]`, higher scores better.
/// Uses the chi-square approximation with `k - 1` degrees of freedom.
pub fn friedman(scores: &[Vec<f64>]) -> Result<FriedmanResult> {
    let k = scores.len();
    if k < 3 {
        return Err(Error::InvalidParameter(format!("friedman needs at least 3 methods, got {k}")));
    }
    let n = scores[0].len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("friedman needs at least 2 datasets, got {n}")));
    }
    if scores.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameter("score rows have different lengths".into()));
    }
    if scores.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("scores must be finite".into()));
    }
    let mut rank_sums = vec![0.0; k];
    for d in 0..n {
        // negate so the highest score gets rank 1
        let column: Vec<f64> = scores.iter().map(|row| -row[d]).collect();
        for (sum, r) in rank_sums.iter_mut().zip(midranks(&column)) {
            *sum += r;
        }
    }
    let mean_ranks: Vec<f64> = rank_sums.iter().map(|s| s / n as f64).collect();
    let centre = (k as f64 + 1.0) / 2.0;
    let spread: f64 = mean_ranks.iter().map(|r| (r - centre).powi(2)).sum();
    let statistic = 12.0 * n as f64 / (k as f64 * (k as f64 + 1.0)) * spread;
    let dist = ChiSquared::new((k - 1) as f64).expect("k >= 3 gives positive dof");
    Ok(FriedmanResult {
        statistic,
        p_value: dist.sf(statistic),
        mean_ranks,
    })
}
