//! Config-driven batch experiments: seeded multi-run execution, result files
//! with a manifest, cross-method comparison tables and front export.
//!
//! All JSON documents carry a `schema_version`. All CSVs are comma-delimited
//! with a header row.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::archive::ArchiveEntry;
use crate::dataset::{self, LabelColumn, SplitPair};
use crate::error::{Error, Result};
use crate::evaluator::Objectives;
use crate::metrics::{self, Front};
use crate::optimizer::{self, Algorithm, OptimizerConfig, RunRecord};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const FRONT_SCHEMA_VERSION: u32 = 1;

/// Overrides `output_dir` from the config file.
pub const OUTPUT_DIR_ENV: &str = "MMIFS_OUTPUT_DIR";

/// Failure of a CLI command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    /// Bad arguments or configuration: exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Failure while doing the work: exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => 2,
            CommandError::Runtime(_) => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CommandError {
    CommandError::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CommandError {
    CommandError::Runtime(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetRef {
    pub name: String,
    pub path: PathBuf,
    pub label_col: LabelColumn,
}

fn default_runs() -> usize {
    10
}
fn default_train_fraction() -> f64 {
    0.75
}
fn default_true() -> bool {
    true
}
fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Mmifs]
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub datasets: Vec<DatasetRef>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// Run `i` uses seed `base_seed + i`.
    #[serde(default)]
    pub base_seed: u64,
    /// Seed of the single train/test split shared by every run on a dataset.
    #[serde(default)]
    pub split_seed: u64,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    /// Min-max scale features before splitting.
    #[serde(default = "default_true")]
    pub normalize: bool,
    /// Stratify the split per class; `false` gives a plain random split.
    #[serde(default = "default_true")]
    pub stratify: bool,
    /// Also write the per-iteration log as CSV next to each record.
    #[serde(default)]
    pub write_logs: bool,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Parses a config file; relative paths are resolved against the file's
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for d in &mut cfg.datasets {
            if d.path.is_relative() {
                d.path = base.join(&d.path);
            }
        }
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {}", self.schema_version));
        }
        if self.runs < 1 {
            return bad("runs must be at least 1".into());
        }
        if self.datasets.is_empty() {
            return bad("no datasets listed".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms listed".into());
        }
        let mut names = BTreeSet::new();
        for d in &self.datasets {
            if d.name.is_empty() || d.name.contains(['/', '\\']) {
                return bad(format!("invalid dataset name {:?}", d.name));
            }
            if !names.insert(&d.name) {
                return bad(format!("duplicate dataset name {:?}", d.name));
            }
            if !d.path.is_file() {
                return bad(format!("dataset file {} does not exist", d.path.display()));
            }
        }
        if BTreeSet::from_iter(&self.algorithms).len() != self.algorithms.len() {
            return bad("duplicate algorithm".into());
        }
        self.optimizer.validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// Loads, optionally scales, and splits one dataset.
    pub fn prepare(&self, d: &DatasetRef) -> Result<SplitPair> {
        let data = dataset::load_csv(&d.path, &d.label_col)?;
        let data = if self.normalize { dataset::min_max_normalize(&data) } else { data };
        let mut split = if self.stratify {
            dataset::stratified_split(&data, self.train_fraction, self.split_seed)?
        } else {
            dataset::random_split(&data, self.train_fraction, self.split_seed)?
        };
        split.train = split.train.with_name(&d.name);
        split.test = split.test.with_name(&d.name);
        Ok(split)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobStatus {
    Ok,
    Failed,
}

/// One run's outputs. Paths are relative to the manifest's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub n_features: usize,
    pub status: JobStatus,
    pub record: Option<PathBuf>,
    pub front: Option<PathBuf>,
    pub log: Option<PathBuf>,
    pub hypervolume: Option<f64>,
    pub eval_count: Option<u64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool_version: String,
    /// False when any job failed.
    pub complete: bool,
    pub config: ExperimentConfig,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: Manifest = serde_json::from_str(&text)?;
        if m.schema_version != MANIFEST_SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "{}: unsupported manifest schema_version {}",
                path.display(),
                m.schema_version
            )));
        }
        Ok(m)
    }
}

/// Writes via a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(fs::Permissions::from_mode(0o644))
            .map_err(|e| Error::io(tmp.path(), e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// `n_selected,error_pct` rows sorted by `n_selected`, then error.
pub fn front_csv(points: &[Objectives]) -> String {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.n_selected.cmp(&b.n_selected).then(a.error_pct.total_cmp(&b.error_pct)));
    let mut out = String::from("n_selected,error_pct\n");
    for p in sorted {
        let _ = writeln!(out, "{},{}", p.n_selected, p.error_pct);
    }
    out
}

pub fn read_front_csv(path: &Path) -> Result<Vec<Objectives>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::InvalidParameter(format!("{}: missing column {name}", path.display())))
    };
    let (ki, ei) = (col("n_selected")?, col("error_pct")?);
    let mut points = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let bad = |c: &str| Error::BadCell {
            path: path.to_path_buf(),
            row: r + 1,
            column: c.to_string(),
            value: rec.get(if c == "n_selected" { ki } else { ei }).unwrap_or("").to_string(),
        };
        let k: usize = rec.get(ki).and_then(|v| v.trim().parse().ok()).ok_or_else(|| bad("n_selected"))?;
        let e: f64 = rec.get(ei).and_then(|v| v.trim().parse().ok()).ok_or_else(|| bad("error_pct"))?;
        points.push(Objectives::new(e, k));
    }
    Ok(points)
}

/// JSON layout of an archive: `{schema_version, n_features, entries: [{mask,
/// error_pct, n_selected}]}` with masks as `'0'/'1'` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontFile {
    pub schema_version: u32,
    pub n_features: usize,
    pub entries: Vec<ArchiveEntry>,
}

impl FrontFile {
    pub fn from_record(record: &RunRecord) -> Self {
        Self {
            schema_version: FRONT_SCHEMA_VERSION,
            n_features: record.n_features,
            entries: record.front.clone(),
        }
    }
}

/// Reads a front from a CSV (needs `n_features`), an archive JSON, or a run
/// record JSON.
pub fn load_front(path: &Path, n_features: Option<usize>) -> Result<Front> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let (n, entries) = if value.get("front").is_some() {
            let rec = RunRecord::from_json(&text)?;
            (rec.n_features, rec.front)
        } else {
            let f: FrontFile = serde_json::from_value(value)?;
            (f.n_features, f.entries)
        };
        Front::new(entries.into_iter().map(|e| e.objectives).collect(), n)
    } else {
        let n = n_features.ok_or_else(|| {
            Error::InvalidParameter(format!("{}: CSV fronts need --n-features", path.display()))
        })?;
        Front::new(read_front_csv(path)?, n)
    }
}

/// File stem of one run's outputs inside the output directory.
fn run_stem(dataset: &str, algorithm: Algorithm, run: usize) -> PathBuf {
    PathBuf::from(dataset).join(algorithm.as_str()).join(format!("run_{run:02}"))
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Executes every (dataset, algorithm, run) job and writes records, fronts and
/// the manifest. Config problems, including unreadable datasets, are
/// [`CommandError::Usage`] and leave no output behind; a failed job marks the
/// manifest incomplete and yields [`CommandError::Runtime`] after all other
/// jobs finish.
pub fn cmd_run(config_path: &Path, workers: Option<usize>, output_override: Option<PathBuf>) -> Result<PathBuf, CommandError> {
    let mut cfg = ExperimentConfig::load(config_path).map_err(usage)?;
    if let Some(out) = output_override {
        cfg.output_dir = out;
    }
    cfg.validate().map_err(usage)?;
    let splits: Vec<SplitPair> = cfg
        .datasets
        .iter()
        .map(|d| cfg.prepare(d).map_err(|e| usage(format!("dataset {:?}: {e}", d.name))))
        .collect::<Result<_, _>>()?;

    let out_dir = cfg.output_dir.clone();
    fs::create_dir_all(&out_dir).map_err(|e| runtime(Error::io(&out_dir, e)))?;

    let jobs: Vec<(usize, Algorithm, usize)> = (0..cfg.datasets.len())
        .flat_map(|d| cfg.algorithms.iter().flat_map(move |&a| (0..cfg.runs).map(move |r| (d, a, r))))
        .collect();

    let execute = |&(d, algorithm, run): &(usize, Algorithm, usize)| -> ManifestEntry {
        let name = &cfg.datasets[d].name;
        let split = &splits[d];
        let seed = cfg.base_seed.wrapping_add(run as u64);
        let mut entry = ManifestEntry {
            dataset: name.clone(),
            algorithm,
            run,
            seed,
            n_features: split.train.n_features(),
            status: JobStatus::Failed,
            record: None,
            front: None,
            log: None,
            hypervolume: None,
            eval_count: None,
            error: None,
        };
        let result = (|| -> Result<()> {
            let opt = OptimizerConfig {
                seed,
                ..cfg.optimizer.clone()
            };
            let record = optimizer::run(algorithm, &opt, split)?;
            let stem = run_stem(name, algorithm, run);
            let record_rel = with_suffix(&stem, ".json");
            let front_rel = with_suffix(&stem, ".front.csv");
            write_atomic(&out_dir.join(&record_rel), record.to_json()?.as_bytes())?;
            write_atomic(&out_dir.join(&front_rel), front_csv(&record.front_objectives()).as_bytes())?;
            if cfg.write_logs {
                let log_rel = with_suffix(&stem, ".log.csv");
                let mut buf = Vec::new();
                record.write_log_csv(&mut buf)?;
                write_atomic(&out_dir.join(&log_rel), &buf)?;
                entry.log = Some(log_rel);
            }
            let front = Front::new(record.front_objectives(), record.n_features)?;
            entry.hypervolume = Some(metrics::hypervolume(&front)?);
            entry.eval_count = Some(record.eval_count);
            entry.record = Some(record_rel);
            entry.front = Some(front_rel);
            Ok(())
        })();
        match result {
            Ok(()) => entry.status = JobStatus::Ok,
            Err(e) => entry.error = Some(e.to_string()),
        }
        entry
    };

    let entries: Vec<ManifestEntry> = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(runtime)?
            .install(|| jobs.par_iter().map(execute).collect()),
        None => jobs.par_iter().map(execute).collect(),
    };

    let failed: Vec<String> = entries
        .iter()
        .filter(|e| e.status == JobStatus::Failed)
        .map(|e| format!("{}/{}/run {}: {}", e.dataset, e.algorithm, e.run, e.error.as_deref().unwrap_or("")))
        .collect();
    let manifest = Manifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        complete: failed.is_empty(),
        config: cfg,
        entries,
    };
    let manifest_path = out_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).map_err(runtime)?;
    write_atomic(&manifest_path, json.as_bytes()).map_err(runtime)?;
    if !failed.is_empty() {
        return Err(CommandError::Runtime(format!(
            "{} job(s) failed; see {}:\n{}",
            failed.len(),
            manifest_path.display(),
            failed.join("\n")
        )));
    }
    Ok(manifest_path)
}

/// Per-run fronts of one method on one dataset.
#[derive(Clone, Debug)]
struct MethodRuns {
    fronts: Vec<Front>,
    hvs: Vec<f64>,
}

impl MethodRuns {
    fn best(&self) -> (usize, f64) {
        // first run wins ties
        self.hvs
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, h)| if h > acc.1 { (i, h) } else { acc })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CMetricRow {
    pub dataset: String,
    pub method_a: String,
    pub method_b: String,
    pub c_metric: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HvRow {
    pub dataset: String,
    pub method: String,
    pub runs: usize,
    pub best_hv: f64,
    pub mean_hv: f64,
    pub std_hv: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WilcoxonRow {
    pub method_a: String,
    pub method_b: String,
    pub n_datasets: usize,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FriedmanRow {
    pub methods: usize,
    pub datasets: usize,
    pub statistic: f64,
    pub p_value: f64,
}

/// Tables produced by [`compare`].
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub c_metric: Vec<CMetricRow>,
    pub hypervolume: Vec<HvRow>,
    pub wilcoxon: Vec<WilcoxonRow>,
    pub friedman: Option<FriedmanRow>,
}

fn to_csv<T: Serialize>(rows: &[T], header: &[&str]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        let _ = w.write_record(header);
    }
    for r in rows {
        let _ = w.serialize(r);
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

impl ComparisonReport {
    pub fn c_metric_csv(&self) -> String {
        to_csv(&self.c_metric, &["dataset", "method_a", "method_b", "c_metric"])
    }

    pub fn hypervolume_csv(&self) -> String {
        to_csv(&self.hypervolume, &["dataset", "method", "runs", "best_hv", "mean_hv", "std_hv"])
    }

    pub fn wilcoxon_csv(&self) -> String {
        to_csv(&self.wilcoxon, &["method_a", "method_b", "n_datasets", "statistic", "p_value", "note"])
    }

    pub fn friedman_csv(&self) -> String {
        to_csv(self.friedman.as_slice(), &["methods", "datasets", "statistic", "p_value"])
    }

    /// Writes `c_metric.csv`, `hypervolume.csv`, `wilcoxon.csv` and
    /// `friedman.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let files = [
            ("c_metric.csv", self.c_metric_csv()),
            ("hypervolume.csv", self.hypervolume_csv()),
            ("wilcoxon.csv", self.wilcoxon_csv()),
            ("friedman.csv", self.friedman_csv()),
        ];
        let mut written = Vec::new();
        for (name, body) in files {
            let p = dir.join(name);
            write_atomic(&p, body.as_bytes())?;
            written.push(p);
        }
        Ok(written)
    }
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Builds comparison tables from one or more manifests.
///
/// Methods are named by algorithm; when the same algorithm appears in several
/// manifests the manifest's directory name is prefixed. Per dataset, each
/// method is represented by its best-HV run for the C-metric. Wilcoxon tests
/// pair per-dataset best HV and are reported only when both methods have the
/// same run count on every dataset.
pub fn compare(manifest_paths: &[PathBuf]) -> Result<ComparisonReport, CommandError> {
    if manifest_paths.is_empty() {
        return Err(usage("compare needs at least one manifest"));
    }
    let mut loaded = Vec::new();
    for p in manifest_paths {
        let m = Manifest::load(p).map_err(usage)?;
        let dir = p.parent().unwrap_or(Path::new(".")).to_path_buf();
        loaded.push((p.clone(), dir, m));
    }
    let mut algo_count: BTreeMap<Algorithm, BTreeSet<usize>> = BTreeMap::new();
    for (i, (_, _, m)) in loaded.iter().enumerate() {
        for e in &m.entries {
            algo_count.entry(e.algorithm).or_default().insert(i);
        }
    }

    // method -> dataset -> runs
    let mut table: BTreeMap<String, BTreeMap<String, MethodRuns>> = BTreeMap::new();
    for (i, (path, dir, m)) in loaded.iter().enumerate() {
        for e in m.entries.iter().filter(|e| e.status == JobStatus::Ok) {
            let label = if algo_count[&e.algorithm].len() > 1 {
                let tag = dir
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| format!("m{i}"));
                format!("{tag}:{}", e.algorithm)
            } else {
                e.algorithm.to_string()
            };
            let front_rel = e
                .front
                .as_ref()
                .ok_or_else(|| usage(format!("{}: entry without front file", path.display())))?;
            let points = read_front_csv(&dir.join(front_rel)).map_err(runtime)?;
            let front = Front::new(points, e.n_features).map_err(runtime)?;
            let hv = metrics::hypervolume(&front).map_err(runtime)?;
            let runs = table
                .entry(label)
                .or_default()
                .entry(e.dataset.clone())
                .or_insert(MethodRuns {
                    fronts: Vec::new(),
                    hvs: Vec::new(),
                });
            runs.fronts.push(front);
            runs.hvs.push(hv);
        }
    }
    if table.len() < 2 {
        return Err(usage(format!(
            "compare needs at least 2 methods, found {}",
            table.len()
        )));
    }
    let coverage: BTreeMap<&String, BTreeSet<&String>> =
        table.iter().map(|(m, ds)| (m, ds.keys().collect())).collect();
    let all: BTreeSet<&String> = coverage.values().flatten().copied().collect();
    let gaps: Vec<String> = coverage
        .iter()
        .filter_map(|(m, ds)| {
            let missing: Vec<&str> = all.difference(ds).map(|s| s.as_str()).collect();
            (!missing.is_empty()).then(|| format!("{m} lacks {}", missing.join(", ")))
        })
        .collect();
    if !gaps.is_empty() {
        return Err(usage(format!("mismatched dataset coverage: {}", gaps.join("; "))));
    }

    let methods: Vec<&String> = table.keys().collect();
    let datasets: Vec<&String> = all.into_iter().collect();
    let mut report = ComparisonReport {
        c_metric: Vec::new(),
        hypervolume: Vec::new(),
        wilcoxon: Vec::new(),
        friedman: None,
    };
    for d in &datasets {
        for m in &methods {
            let runs = &table[*m][*d];
            let (mean, std) = mean_std(&runs.hvs);
            report.hypervolume.push(HvRow {
                dataset: d.to_string(),
                method: m.to_string(),
                runs: runs.hvs.len(),
                best_hv: runs.best().1,
                mean_hv: mean,
                std_hv: std,
            });
        }
        for a in &methods {
            let ra = &table[*a][*d];
            let fa = &ra.fronts[ra.best().0];
            for b in &methods {
                let rb = &table[*b][*d];
                let fb = &rb.fronts[rb.best().0];
                report.c_metric.push(CMetricRow {
                    dataset: d.to_string(),
                    method_a: a.to_string(),
                    method_b: b.to_string(),
                    c_metric: metrics::c_metric(fa, fb).map_err(runtime)?,
                });
            }
        }
    }
    for (i, a) in methods.iter().enumerate() {
        for b in &methods[i + 1..] {
            let matched = datasets
                .iter()
                .all(|d| table[*a][*d].hvs.len() == table[*b][*d].hvs.len());
            let mut row = WilcoxonRow {
                method_a: a.to_string(),
                method_b: b.to_string(),
                n_datasets: datasets.len(),
                statistic: None,
                p_value: None,
                note: String::new(),
            };
            if !matched {
                row.note = "run counts differ".into();
            } else {
                let diffs: Vec<f64> = datasets
                    .iter()
                    .map(|d| table[*a][*d].best().1 - table[*b][*d].best().1)
                    .collect();
                match metrics::wilcoxon_exact(&diffs) {
                    Ok(w) => {
                        row.statistic = Some(w.statistic);
                        row.p_value = Some(w.p_value);
                    }
                    Err(e) => row.note = e.to_string(),
                }
            }
            report.wilcoxon.push(row);
        }
    }
    if methods.len() >= 3 && datasets.len() >= 2 {
        let scores: Vec<Vec<f64>> = methods
            .iter()
            .map(|m| datasets.iter().map(|d| table[*m][*d].best().1).collect())
            .collect();
        let f = metrics::friedman(&scores).map_err(runtime)?;
        report.friedman = Some(FriedmanRow {
            methods: methods.len(),
            datasets: datasets.len(),
            statistic: f.statistic,
            p_value: f.p_value,
        });
    }
    Ok(report)
}

/// Writes `<record stem>.front.csv` for each run record, into `out_dir` or
/// next to the record.
pub fn cmd_front_export(records: &[PathBuf], out_dir: Option<&Path>) -> Result<Vec<PathBuf>, CommandError> {
    if records.is_empty() {
        return Err(usage("front-export needs at least one run record"));
    }
    let mut written = Vec::new();
    for path in records {
        let text = fs::read_to_string(path).map_err(|e| runtime(Error::io(path, e)))?;
        let record = RunRecord::from_json(&text).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        if record.front.is_empty() {
            return Err(runtime(format!("{}: record has an empty front", path.display())));
        }
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "record".into());
        let dir = out_dir
            .map(Path::to_path_buf)
            .unwrap_or_else(|| path.parent().unwrap_or(Path::new(".")).to_path_buf());
        let target = dir.join(format!("{stem}.front.csv"));
        write_atomic(&target, front_csv(&record.front_objectives()).as_bytes()).map_err(runtime)?;
        written.push(target);
    }
    Ok(written)
}
