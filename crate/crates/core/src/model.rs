//! The learned sampling model: a significance vector (per-feature goodness)
//! and a symmetric interaction matrix (pairwise goodness), with roulette-wheel
//! offspring construction and the winner/loser update rule.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::FeatureSubset;

/// Version tag written into model JSON.
pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// Learning rates and clamp bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    /// Step for ordinary strengthening/weakening, in (0, 1).
    pub alpha: f64,
    /// Step for the confident pairwise cases; larger than `alpha`.
    pub beta: f64,
    pub sv_min: f64,
    pub sv_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            beta: 0.3,
            sv_min: 0.01,
            sv_max: 100.0,
            im_min: 0.01,
            im_max: 100.0,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0,1)");
        }
        if self.beta.partial_cmp(&self.alpha) != Some(std::cmp::Ordering::Greater) || !self.beta.is_finite() {
            return bad("beta must be finite and greater than alpha");
        }
        if !(self.sv_min > 0.0 && self.sv_min <= self.sv_max && self.sv_max.is_finite()) {
            return bad("sv bounds must satisfy 0 < sv_min <= sv_max < inf");
        }
        if !(self.im_min > 0.0 && self.im_min <= self.im_max && self.im_max.is_finite()) {
            return bad("im bounds must satisfy 0 < im_min <= im_max < inf");
        }
        Ok(())
    }
}

/// Per-feature goodness scores, all strictly positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignificanceVector(Vec<f64>);

impl SignificanceVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("significance vector is empty".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidParameter(
                "significance entries must be finite and positive".into(),
            ));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }
}

/// Symmetric pairwise goodness scores; the diagonal is unused.
///
/// Only the strict upper triangle is stored.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl InteractionMatrix {
    pub fn filled(n: usize, value: f64) -> Self {
        Self {
            n,
            upper: vec![value; n * n.saturating_sub(1) / 2],
        }
    }

    /// From a dense `n x n` matrix; must be symmetric off the diagonal.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut im = Self::filled(n, 1.0);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter("interaction matrix is not square".into()));
            }
            for j in (i + 1)..n {
                let v = row[j];
                if v != rows[j][i] {
                    return Err(Error::InvalidParameter(format!(
                        "interaction matrix not symmetric at ({i},{j})"
                    )));
                }
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::InvalidParameter(
                        "interaction entries must be finite and positive".into(),
                    ));
                }
                im.set(i, j, v);
            }
        }
        Ok(im)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(a != b && b < self.n);
        // row a starts after rows 0..a, each holding n-1-r entries
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let idx = self.index(i, j);
        self.upper[idx] = v;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if i == j { 1.0 } else { self.get(i, j) })
                    .collect()
            })
            .collect()
    }
}

impl Serialize for InteractionMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_dense().serialize(s)
    }
}

impl<'de> Deserialize<'de> for InteractionMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        InteractionMatrix::from_dense(&rows).map_err(serde::de::Error::custom)
    }
}

/// Complete sampling model state. Serializes to
/// `{"schema_version", "params", "sv", "im"}` where `im` is dense `n x n`
/// with a diagonal of 1.0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityModel {
    pub schema_version: u32,
    pub params: ModelParams,
    pub sv: SignificanceVector,
    pub im: InteractionMatrix,
}

/// All-ones model for `n` features, so the first sampling pass is uniform.
pub fn init_uniform(n: usize) -> Result<(SignificanceVector, InteractionMatrix)> {
    if n == 0 {
        return Err(Error::InvalidParameter("feature count must be at least 1".into()));
    }
    Ok((SignificanceVector(vec![1.0; n]), InteractionMatrix::filled(n, 1.0)))
}

/// Probability of each feature being drawn first: `sv[j] / sum(sv)`.
pub fn first_feature_probabilities(sv: &SignificanceVector) -> Vec<f64> {
    let total: f64 = sv.0.iter().sum();
    sv.0.iter().map(|v| v / total).collect()
}

/// Normalizes log-weights over the candidates (`None` marks excluded entries)
/// by subtracting the maximum before exponentiating.
fn softmax_masked(log_weights: &[Option<f64>]) -> Vec<f64> {
    let max = log_weights
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = log_weights
        .iter()
        .map(|lw| lw.map_or(0.0, |v| (v - max).exp()))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Probability of each unselected feature being drawn next given the already
/// selected set: proportional to `sv[j] * prod_{l in selected} im[j][l]`.
/// Selected features get probability 0.
pub fn conditional_probabilities(
    sv: &SignificanceVector,
    im: &InteractionMatrix,
    selected: &FeatureSubset,
) -> Result<Vec<f64>> {
    let n = sv.len();
    if selected.len() != n || im.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: selected.len(),
        });
    }
    if selected.is_empty() {
        return Err(Error::InvalidParameter(
            "conditional sampling needs a non-empty selected set".into(),
        ));
    }
    if selected.count() == n {
        return Err(Error::InvalidParameter("every feature is already selected".into()));
    }
    let chosen: Vec<usize> = selected.indices().collect();
    let log_weights: Vec<Option<f64>> = (0..n)
        .map(|j| {
            (!selected.contains(j)).then(|| {
                sv.get(j).ln() + chosen.iter().map(|&l| im.get(j, l).ln()).sum::<f64>()
            })
        })
        .collect();
    Ok(softmax_masked(&log_weights))
}

/// Roulette-wheel draw: index `j` with probability `p[j]`.
pub fn roulette_select<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> Result<usize> {
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidDistribution("entries must be finite and non-negative".into()));
    }
    let total: f64 = p.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidDistribution("all-zero distribution".into()));
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
    }
    Ok(spin(p, total, rng))
}

/// Wheel spin over non-negative weights with a positive total.
fn spin<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (j, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = j;
            if target < acc {
                return j;
            }
        }
    }
    // rounding left target at or above the accumulated total
    last_positive
}

/// One draw from the chi-square distribution with `r` degrees of freedom, as
/// the sum of `r` squared standard normals.
pub fn chi_square_draw<R: Rng + ?Sized>(r: usize, rng: &mut R) -> Result<f64> {
    if r < 1 {
        return Err(Error::InvalidParameter("degrees of freedom must be at least 1".into()));
    }
    Ok((0..r)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            z * z
        })
        .sum())
}

/// Rounds a continuous size draw and clamps it to `[1, n]`.
pub fn size_from_draw(x: f64, n: usize) -> usize {
    let m = x.round();
    if m < 1.0 {
        1
    } else if m >= n as f64 {
        n
    } else {
        m as usize
    }
}

/// Offspring subset size guided by the winner's feature count `r`.
pub fn sample_subset_size<R: Rng + ?Sized>(r: usize, n: usize, rng: &mut R) -> Result<usize> {
    if n < 1 {
        return Err(Error::InvalidParameter("feature count must be at least 1".into()));
    }
    Ok(size_from_draw(chi_square_draw(r, rng)?, n))
}

/// Builds an offspring of exactly `m` distinct features: the first by
/// roulette over the significance vector, each later one by roulette over the
/// conditional distribution given everything selected so far.
pub fn generate_offspring_with_size<R: Rng + ?Sized>(
    sv: &SignificanceVector,
    im: &InteractionMatrix,
    m: usize,
    rng: &mut R,
) -> Result<FeatureSubset> {
    let n = sv.len();
    if im.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: im.n(),
        });
    }
    if m < 1 || m > n {
        return Err(Error::InvalidParameter(format!("subset size {m} outside [1, {n}]")));
    }
    let mut subset = FeatureSubset::empty(n);
    let p1 = first_feature_probabilities(sv);
    let first = spin(&p1, p1.iter().sum(), rng);
    subset.insert(first);

    // log-weight of each candidate, updated incrementally as features join
    let mut log_weights: Vec<Option<f64>> = (0..n).map(|j| Some(sv.get(j).ln())).collect();
    let mut last = first;
    log_weights[first] = None;
    for _ in 1..m {
        for (j, lw) in log_weights.iter_mut().enumerate() {
            if let Some(v) = lw {
                *v += im.get(j, last).ln();
            }
        }
        let p = softmax_masked(&log_weights);
        let next = spin(&p, p.iter().sum(), rng);
        subset.insert(next);
        log_weights[next] = None;
        last = next;
    }
    Ok(subset)
}

/// Samples `m ~ chi2(r)` (rounded, clamped to `[1, n]`) and then an offspring
/// of that size.
pub fn generate_offspring<R: Rng + ?Sized>(
    sv: &SignificanceVector,
    im: &InteractionMatrix,
    r: usize,
    rng: &mut R,
) -> Result<FeatureSubset> {
    let m = sample_subset_size(r, sv.len(), rng)?;
    generate_offspring_with_size(sv, im, m, rng)
}

/// Change in `sv[i]` for one feature: +alpha when only the winner has it,
/// -alpha when only the loser has it.
pub fn sv_delta(w: bool, l: bool, alpha: f64) -> f64 {
    match (w, l) {
        (true, false) => alpha,
        (false, true) => -alpha,
        _ => 0.0,
    }
}

/// Change in `im[i][j]` for one pair given how many of the two features the
/// winner and the loser hold.
pub fn im_delta(winner_has: u8, loser_has: u8, alpha: f64, beta: f64) -> f64 {
    match (winner_has, loser_has) {
        (2, 0) => alpha,
        (2, 1) => beta,
        (0, 2) => -alpha,
        (1, 2) => -beta,
        _ => 0.0,
    }
}

/// Winner/loser update: once per feature for `sv`, once per unordered pair for
/// `im`, then clamped into the configured bounds.
pub fn update(
    sv: &mut SignificanceVector,
    im: &mut InteractionMatrix,
    winner: &FeatureSubset,
    loser: &FeatureSubset,
    params: &ModelParams,
) -> Result<()> {
    let n = sv.len();
    for len in [winner.len(), loser.len(), im.n()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, got: len });
        }
    }
    if winner == loser {
        return Ok(());
    }
    let w = winner.to_bools();
    let l = loser.to_bools();
    for i in 0..n {
        let d = sv_delta(w[i], l[i], params.alpha);
        if d != 0.0 {
            sv.0[i] = (sv.0[i] + d).clamp(params.sv_min, params.sv_max);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = im_delta(
                w[i] as u8 + w[j] as u8,
                l[i] as u8 + l[j] as u8,
                params.alpha,
                params.beta,
            );
            if d != 0.0 {
                let v = (im.get(i, j) + d).clamp(params.im_min, params.im_max);
                im.set(i, j, v);
            }
        }
    }
    Ok(())
}

impl ProbabilityModel {
    pub fn uniform(n: usize, params: ModelParams) -> Result<Self> {
        params.validate()?;
        let (sv, im) = init_uniform(n)?;
        Ok(Self {
            schema_version: MODEL_SCHEMA_VERSION,
            params,
            sv,
            im,
        })
    }

    pub fn n(&self) -> usize {
        self.sv.len()
    }

    pub fn generate_offspring<R: Rng + ?Sized>(&self, r: usize, rng: &mut R) -> Result<FeatureSubset> {
        generate_offspring(&self.sv, &self.im, r, rng)
    }

    pub fn update(&mut self, winner: &FeatureSubset, loser: &FeatureSubset) -> Result<()> {
        update(&mut self.sv, &mut self.im, winner, loser, &self.params)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(s)?;
        if model.sv.len() != model.im.n() {
            return Err(Error::LengthMismatch {
                expected: model.sv.len(),
                got: model.im.n(),
            });
        }
        model.params.validate()?;
        Ok(model)
    }
}
