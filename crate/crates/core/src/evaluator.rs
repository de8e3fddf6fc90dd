//! Wrapper fitness: the two minimization objectives of a feature subset,
//! computed with a k-nearest-neighbour classifier and memoized per mask.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, SplitPair};
use crate::error::{Error, Result};
use crate::subset::FeatureSubset;

/// Classification error (percent) and selected-feature count, both minimized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Objectives {
    pub error_pct: f64,
    pub n_selected: usize,
}

impl Objectives {
    pub fn new(error_pct: f64, n_selected: usize) -> Self {
        Self {
            error_pct,
            n_selected,
        }
    }

    /// `self` is no worse than `other` on both axes.
    pub fn covers(&self, other: &Objectives) -> bool {
        self.error_pct <= other.error_pct && self.n_selected <= other.n_selected
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    FirstDominates,
    SecondDominates,
    Incomparable,
}

/// Pareto dominance under minimization of both objectives. Equal pairs are
/// incomparable.
pub fn dominates(a: &Objectives, b: &Objectives) -> Dominance {
    let a_cov = a.covers(b);
    let b_cov = b.covers(a);
    match (a_cov, b_cov) {
        (true, false) => Dominance::FirstDominates,
        (false, true) => Dominance::SecondDominates,
        _ => Dominance::Incomparable,
    }
}

/// How the error objective is estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FitnessMode {
    /// Train on the train split, score on the held-out test split.
    #[default]
    TestSplit,
    /// k-fold cross-validation inside the train split; the test split is
    /// never touched.
    CrossValidation { folds: usize },
}

/// Majority vote among the `k` nearest reference rows (Euclidean distance on
/// `cols`). Neighbours at equal distance are taken in reference-row order.
/// Vote ties go to the class with the smallest summed neighbour distance, then
/// the lowest class id.
fn classify(reference: &Dataset, ref_rows: &[usize], query: &[f64], cols: &[usize], k: usize, n_classes: usize) -> usize {
    let mut dist: Vec<(f64, usize)> = ref_rows
        .iter()
        .map(|&r| {
            let row = reference.row(r);
            let d2: f64 = cols.iter().map(|&j| (row[j] - query[j]).powi(2)).sum();
            (d2, r)
        })
        .collect();
    if k < dist.len() {
        dist.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        dist.truncate(k);
    }
    let mut votes = vec![0usize; n_classes];
    let mut summed = vec![0.0f64; n_classes];
    for &(d2, r) in &dist {
        let c = reference.labels()[r];
        votes[c] += 1;
        summed[c] += d2.sqrt();
    }
    (0..n_classes)
        .max_by(|&a, &b| {
            votes[a]
                .cmp(&votes[b])
                .then(summed[b].total_cmp(&summed[a]))
                .then(b.cmp(&a))
        })
        .expect("at least one class")
}

fn misclassified(reference: &Dataset, ref_rows: &[usize], queries: &Dataset, query_rows: &[usize], cols: &[usize], k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k > ref_rows.len() {
        return Err(Error::KTooLarge {
            k,
            rows: ref_rows.len(),
        });
    }
    let n_classes = reference.n_classes().max(queries.n_classes());
    Ok(query_rows
        .iter()
        .filter(|&&q| classify(reference, ref_rows, queries.row(q), cols, k, n_classes) != queries.labels()[q])
        .count())
}

fn check_subset(subset: &FeatureSubset, n_features: usize) -> Result<Vec<usize>> {
    if subset.len() != n_features {
        return Err(Error::LengthMismatch {
            expected: n_features,
            got: subset.len(),
        });
    }
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(subset.indices().collect())
}

/// Percentage of test rows misclassified by KNN trained on the train split,
/// using only the subset's columns.
pub fn knn_error(subset: &FeatureSubset, split: &SplitPair, k: usize) -> Result<f64> {
    let cols = check_subset(subset, split.train.n_features())?;
    let train_rows: Vec<usize> = (0..split.train.n_instances()).collect();
    let test_rows: Vec<usize> = (0..split.test.n_instances()).collect();
    let wrong = misclassified(&split.train, &train_rows, &split.test, &test_rows, &cols, k)?;
    Ok(100.0 * wrong as f64 / test_rows.len() as f64)
}

/// Cross-validated KNN error on the train split alone. Row `i` of the train
/// split belongs to fold `i % folds`.
pub fn knn_cv_error(subset: &FeatureSubset, train: &Dataset, k: usize, folds: usize) -> Result<f64> {
    let cols = check_subset(subset, train.n_features())?;
    let n = train.n_instances();
    if folds < 2 || folds > n {
        return Err(Error::InvalidParameter(format!(
            "folds must lie in [2, {n}], got {folds}"
        )));
    }
    let mut wrong = 0;
    for f in 0..folds {
        let (held, fit): (Vec<usize>, Vec<usize>) = (0..n).partition(|i| i % folds == f);
        wrong += misclassified(train, &fit, train, &held, &cols, k)?;
    }
    Ok(100.0 * wrong as f64 / n as f64)
}

/// Memoizing objective evaluator bound to one split.
///
/// The cache is safe for concurrent use; two threads racing on the same mask
/// may both compute it, which only costs time.
pub struct Evaluator<'a> {
    split: &'a SplitPair,
    k: usize,
    mode: FitnessMode,
    cache: Mutex<HashMap<FeatureSubset, Objectives>>,
    calls: AtomicU64,
    misses: AtomicU64,
}

impl<'a> Evaluator<'a> {
    pub fn new(split: &'a SplitPair, k: usize, mode: FitnessMode) -> Result<Self> {
        let reference = match mode {
            FitnessMode::TestSplit => split.train.n_instances(),
            FitnessMode::CrossValidation { folds } => {
                if folds < 2 || folds > split.train.n_instances() {
                    return Err(Error::InvalidParameter(format!("invalid fold count {folds}")));
                }
                split.train.n_instances() - split.train.n_instances().div_ceil(folds)
            }
        };
        if k == 0 || k > reference {
            return Err(Error::KTooLarge { k, rows: reference });
        }
        Ok(Self {
            split,
            k,
            mode,
            cache: Mutex::new(HashMap::new()),
            calls: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        })
    }

    pub fn n_features(&self) -> usize {
        self.split.train.n_features()
    }

    pub fn split(&self) -> &SplitPair {
        self.split
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn evaluate(&self, subset: &FeatureSubset) -> Result<Objectives> {
        self.evaluate_tracked(subset).map(|(o, _)| o)
    }

    /// Like [`evaluate`](Self::evaluate) but also reports whether the value
    /// came from the cache.
    pub fn evaluate_tracked(&self, subset: &FeatureSubset) -> Result<(Objectives, bool)> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        if let Some(o) = self.cache.lock().unwrap().get(subset) {
            return Ok((*o, true));
        }
        let error_pct = match self.mode {
            FitnessMode::TestSplit => knn_error(subset, self.split, self.k)?,
            FitnessMode::CrossValidation { folds } => knn_cv_error(subset, &self.split.train, self.k, folds)?,
        };
        let objectives = Objectives::new(error_pct, subset.count());
        let mut cache = self.cache.lock().unwrap();
        if cache.insert(subset.clone(), objectives).is_none() {
            self.misses.fetch_add(1, Ordering::Relaxed);
        }
        Ok((objectives, false))
    }

    /// Distinct masks evaluated (cache misses).
    pub fn eval_count(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    /// All evaluate calls including cache hits.
    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}
