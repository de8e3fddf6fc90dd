//! Tabular classification datasets: CSV loading, min-max scaling, stratified
//! train/test splitting and column projection.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::FeatureSubset;

/// Which CSV column holds the class label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    /// Integers become indices; anything else is a header name. A header that
    /// literally is an integer is still matched by name first in `load_csv`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

impl fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelColumn::Index(i) => write!(f, "{i}"),
            LabelColumn::Name(s) => f.write_str(s),
        }
    }
}

/// An immutable, row-major feature matrix with integer class labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    name: String,
    feature_names: Vec<String>,
    values: Vec<f64>,
    labels: Vec<usize>,
    class_names: Vec<String>,
    n_features: usize,
}

impl Dataset {
    /// Builds a dataset from rows, validating shape, finiteness and labels.
    ///
    /// Labels must already be `0..n_classes` with every class present.
    pub fn new(name: impl Into<String>, rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        let n_features = rows.first().map_or(0, Vec::len);
        let n_classes = labels.iter().max().map_or(0, |m| m + 1);
        let class_names = (0..n_classes).map(|c| c.to_string()).collect();
        let feature_names = (0..n_features).map(|j| format!("f{j}")).collect();
        let mut values = Vec::with_capacity(rows.len() * n_features);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::InvalidDataset(format!(
                    "row {r} has {} values, expected {n_features}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::from_parts(name.into(), feature_names, values, labels, class_names)
    }

    fn from_parts(
        name: String,
        feature_names: Vec<String>,
        values: Vec<f64>,
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let n_features = feature_names.len();
        if n_features == 0 {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }
        if labels.len() < 2 {
            return Err(Error::InvalidDataset(format!(
                "{} row(s); at least 2 required",
                labels.len()
            )));
        }
        if values.len() != labels.len() * n_features {
            return Err(Error::InvalidDataset("value count does not match shape".into()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {}, feature {}",
                pos / n_features,
                pos % n_features
            )));
        }
        let mut seen = vec![false; class_names.len()];
        for &l in &labels {
            match seen.get_mut(l) {
                Some(s) => *s = true,
                None => return Err(Error::InvalidDataset(format!("label {l} out of range"))),
            }
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidDataset(format!("class {c} has no rows")));
        }
        Ok(Self {
            name,
            feature_names,
            values,
            labels,
            class_names,
            n_features,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_instances(&self) -> usize {
        self.labels.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Original label strings, indexed by class id.
    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_features)
    }

    pub fn value(&self, row: usize, feature: usize) -> f64 {
        self.values[row * self.n_features + feature]
    }

    /// Row counts per class id.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// A new dataset made of the given rows, in the given order. Class ids are
    /// kept as-is, so a class may be absent from the result.
    fn select_rows(&self, rows: &[usize]) -> Dataset {
        let mut values = Vec::with_capacity(rows.len() * self.n_features);
        for &r in rows {
            values.extend_from_slice(self.row(r));
        }
        Dataset {
            name: self.name.clone(),
            feature_names: self.feature_names.clone(),
            values,
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            class_names: self.class_names.clone(),
            n_features: self.n_features,
        }
    }
}

/// Loads a comma-delimited CSV with a header row.
///
/// Labels are remapped to `0..n_classes` in first-appearance order.
pub fn load_csv(path: impl AsRef<Path>, label_column: &LabelColumn) -> Result<Dataset> {
    let path = path.as_ref();
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();

    let label_idx = match label_column {
        LabelColumn::Name(name) => headers.iter().position(|h| h == name),
        LabelColumn::Index(i) => headers
            .iter()
            .position(|h| *h == i.to_string())
            .or_else(|| (*i < headers.len()).then_some(*i)),
    }
    .ok_or_else(|| Error::LabelColumn(label_column.to_string()))?;

    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut class_ids: HashMap<String, usize> = HashMap::new();
    let mut class_names = Vec::new();

    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        // 1-based data row number, header excluded
        let row = r + 1;
        if record.len() != headers.len() {
            return Err(Error::InvalidDataset(format!(
                "{}: row {row} has {} fields, header has {}",
                path.display(),
                record.len(),
                headers.len()
            )));
        }
        for (j, cell) in record.iter().enumerate() {
            if j == label_idx {
                let next = class_ids.len();
                let id = *class_ids.entry(cell.to_string()).or_insert_with(|| {
                    class_names.push(cell.to_string());
                    next
                });
                labels.push(id);
                continue;
            }
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::BadCell {
                    path: path.to_path_buf(),
                    row,
                    column: headers[j].clone(),
                    value: cell.to_string(),
                })?;
            values.push(v);
        }
    }

    if labels.is_empty() {
        return Err(Error::NoDataRows {
            path: path.to_path_buf(),
        });
    }
    if labels.len() < 2 {
        return Err(Error::InvalidDataset(format!(
            "{}: only one data row",
            path.display()
        )));
    }
    if class_names.len() < 2 {
        return Err(Error::InvalidDataset(format!(
            "{}: single distinct label {:?}",
            path.display(),
            class_names[0]
        )));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Dataset::from_parts(name, feature_names, values, labels, class_names)
}

/// Maps every column to `[0, 1]` by `(x - min) / (max - min)`. Constant
/// columns become all zeros.
pub fn min_max_normalize(d: &Dataset) -> Dataset {
    let n = d.n_features;
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for row in d.rows() {
        for (j, &v) in row.iter().enumerate() {
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    let mut out = d.clone();
    for row in out.values.chunks_exact_mut(n) {
        for (j, v) in row.iter_mut().enumerate() {
            let span = hi[j] - lo[j];
            *v = if span > 0.0 { (*v - lo[j]) / span } else { 0.0 };
        }
    }
    out
}

/// A train/test partition of one dataset.
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub train: Dataset,
    pub test: Dataset,
    /// Source row indices of `train`, ascending.
    pub train_rows: Vec<usize>,
    /// Source row indices of `test`, ascending.
    pub test_rows: Vec<usize>,
    pub seed: u64,
    pub train_fraction: f64,
}

fn check_fraction(train_fraction: f64) -> Result<()> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train_fraction must lie in (0,1), got {train_fraction}"
        )));
    }
    Ok(())
}

fn assemble(d: &Dataset, mut train_rows: Vec<usize>, mut test_rows: Vec<usize>, seed: u64, train_fraction: f64) -> SplitPair {
    train_rows.sort_unstable();
    test_rows.sort_unstable();
    SplitPair {
        train: d.select_rows(&train_rows),
        test: d.select_rows(&test_rows),
        train_rows,
        test_rows,
        seed,
        train_fraction,
    }
}

/// Per-class random partition. The total train size is
/// `round(train_fraction * rows)`, apportioned across classes by largest
/// remainder, and every class keeps at least one row on each side.
pub fn stratified_split(d: &Dataset, train_fraction: f64, seed: u64) -> Result<SplitPair> {
    check_fraction(train_fraction)?;
    let counts = d.class_counts();
    if let Some((class, &count)) = counts.iter().enumerate().find(|(_, &c)| c < 2) {
        return Err(Error::ClassTooSmall { class, count });
    }

    let total = (train_fraction * d.n_instances() as f64).round() as usize;
    let exact: Vec<f64> = counts.iter().map(|&c| train_fraction * c as f64).collect();
    let mut quota: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut by_remainder: Vec<usize> = (0..counts.len()).collect();
    by_remainder.sort_by(|&a, &b| {
        let (ra, rb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let assigned: usize = quota.iter().sum();
    for &c in by_remainder.iter().take(total.saturating_sub(assigned)) {
        quota[c] += 1;
    }
    for (q, &c) in quota.iter_mut().zip(&counts) {
        *q = (*q).clamp(1, c - 1);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for (class, &q) in quota.iter().enumerate() {
        let mut rows: Vec<usize> = (0..d.n_instances()).filter(|&r| d.labels[r] == class).collect();
        rows.shuffle(&mut rng);
        train_rows.extend_from_slice(&rows[..q]);
        test_rows.extend_from_slice(&rows[q..]);
    }
    Ok(assemble(d, train_rows, test_rows, seed, train_fraction))
}

/// Plain random partition ignoring class labels.
pub fn random_split(d: &Dataset, train_fraction: f64, seed: u64) -> Result<SplitPair> {
    check_fraction(train_fraction)?;
    let n = d.n_instances();
    let total = ((train_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut rows: Vec<usize> = (0..n).collect();
    rows.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test_rows = rows.split_off(total);
    Ok(assemble(d, rows, test_rows, seed, train_fraction))
}

/// Keeps only the selected columns, in original order.
pub fn project(d: &Dataset, subset: &FeatureSubset) -> Result<Dataset> {
    if subset.len() != d.n_features {
        return Err(Error::LengthMismatch {
            expected: d.n_features,
            got: subset.len(),
        });
    }
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let cols: Vec<usize> = subset.indices().collect();
    let mut values = Vec::with_capacity(d.n_instances() * cols.len());
    for row in d.rows() {
        values.extend(cols.iter().map(|&j| row[j]));
    }
    Ok(Dataset {
        name: d.name.clone(),
        feature_names: cols.iter().map(|&j| d.feature_names[j].clone()).collect(),
        values,
        labels: d.labels.clone(),
        class_names: d.class_names.clone(),
        n_features: cols.len(),
    })
}
