//! The (1+1) archive loop. `Mmifs` draws offspring from the learned model,
//! `BlindPaes` mutates the parent bitwise, `RandomSearch` samples masks
//! uniformly and only feeds the archive.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::archive::{AddOutcome, Archive, ArchiveEntry, DEFAULT_CAPACITY, DEFAULT_GRID_DEPTH};
use crate::dataset::SplitPair;
use crate::error::{Error, Result};
use crate::evaluator::{dominates, Dominance, Evaluator, FitnessMode, Objectives};
use crate::model::{ModelParams, ProbabilityModel};
use crate::subset::FeatureSubset;

pub const RECORD_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Mmifs,
    BlindPaes,
    #[serde(rename = "random")]
    RandomSearch,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Mmifs, Algorithm::BlindPaes, Algorithm::RandomSearch];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Mmifs => "mmifs",
            Algorithm::BlindPaes => "blind_paes",
            Algorithm::RandomSearch => "random",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

/// How the first parent is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitialSubsetPolicy {
    /// Size uniform in `[1, n]`, features uniform without replacement.
    #[default]
    Random,
    /// Every feature selected.
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Distinct subsets evaluated before stopping. Cache hits are free.
    pub max_evaluations: u64,
    /// Hard stop on loop iterations; defaults to 10x the evaluation budget.
    /// Small feature spaces can run out of unseen subsets before the budget.
    pub max_iterations: Option<u64>,
    pub archive_capacity: usize,
    pub grid_depth: u32,
    pub model: ModelParams,
    pub knn_k: usize,
    pub fitness: FitnessMode,
    pub seed: u64,
    pub initial_subset_policy: InitialSubsetPolicy,
    /// Per-bit flip probability for the blind mutation; `None` means `1/n`.
    pub mutation_rate: Option<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_evaluations: 5000,
            max_iterations: None,
            archive_capacity: DEFAULT_CAPACITY,
            grid_depth: DEFAULT_GRID_DEPTH,
            model: ModelParams::default(),
            knn_k: 5,
            fitness: FitnessMode::TestSplit,
            seed: 0,
            initial_subset_policy: InitialSubsetPolicy::Random,
            mutation_rate: None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.max_evaluations < 2 {
            return bad(format!("max_evaluations must be at least 2, got {}", self.max_evaluations));
        }
        if self.archive_capacity < 1 {
            return bad("archive_capacity must be at least 1".into());
        }
        if !(1..=16).contains(&self.grid_depth) {
            return bad(format!("grid_depth must lie in [1, 16], got {}", self.grid_depth));
        }
        if self.knn_k < 1 {
            return bad("knn_k must be at least 1".into());
        }
        if let Some(rate) = self.mutation_rate {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("mutation_rate must lie in [0, 1], got {rate}"));
            }
        }
        self.model.validate()
    }

    pub fn iteration_cap(&self) -> u64 {
        self.max_iterations.unwrap_or(self.max_evaluations.saturating_mul(10))
    }
}

/// Which arm of the acceptance logic an iteration took.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// The parent dominates the offspring.
    #[serde(rename = "1")]
    ParentDominates,
    /// An archive member dominates the offspring.
    #[serde(rename = "2a")]
    DominatedByArchive,
    /// The offspring dominates at least one archive member.
    #[serde(rename = "2b")]
    DominatesArchive,
    /// Mutually non-dominated with the archive; crowding decides.
    #[serde(rename = "2c")]
    NonDominated,
    /// Random search: the sample only goes to the archive.
    #[serde(rename = "sample")]
    Sample,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::ParentDominates => "1",
            Branch::DominatedByArchive => "2a",
            Branch::DominatesArchive => "2b",
            Branch::NonDominated => "2c",
            Branch::Sample => "sample",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Parent,
    Offspring,
}

/// One line of the per-iteration log. `parent_*` describe the parent before
/// the step; `r` is the value after it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iteration: u64,
    pub branch: Branch,
    pub archive_outcome: Option<AddOutcome>,
    pub parent_err: f64,
    pub parent_k: usize,
    pub off_err: f64,
    pub off_k: usize,
    pub cached: bool,
    pub winner: Option<Side>,
    pub winner_k: Option<usize>,
    pub loser_k: Option<usize>,
    pub parent_changed: bool,
    pub r: usize,
    pub archive_size: usize,
}

/// Mutable state of one run.
#[derive(Clone, Debug)]
pub struct OptimizerState {
    pub algorithm: Algorithm,
    pub parent: ArchiveEntry,
    pub archive: Archive,
    /// Present for `Mmifs` only.
    pub model: Option<ProbabilityModel>,
    /// Feature count of the most recent winner; degrees of freedom for the
    /// subset-size draw.
    pub r: usize,
    pub iteration: u64,
    pub rng: ChaCha8Rng,
    mutation_rate: f64,
}

fn random_subset<R: Rng + ?Sized>(n: usize, rng: &mut R) -> FeatureSubset {
    let size = rng.random_range(1..=n);
    let mut s = FeatureSubset::empty(n);
    for i in index::sample(rng, n, size) {
        s.insert(i);
    }
    s
}

/// Each bit set with probability 1/2, redrawn while empty.
fn uniform_mask<R: Rng + ?Sized>(n: usize, rng: &mut R) -> FeatureSubset {
    loop {
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let s = FeatureSubset::from_bools(&bits);
        if !s.is_empty() {
            return s;
        }
    }
}

const MAX_MUTATION_REDRAWS: usize = 100;

/// Independent per-bit flips, redrawn while the result is empty. If every
/// redraw comes out empty (e.g. rate 1 on a full mask) one random bit is set.
pub fn bitwise_mutation<R: Rng + ?Sized>(parent: &FeatureSubset, rate: f64, rng: &mut R) -> FeatureSubset {
    for _ in 0..MAX_MUTATION_REDRAWS {
        let mut child = parent.clone();
        for i in 0..parent.len() {
            if rng.random_bool(rate) {
                child.toggle(i);
            }
        }
        if !child.is_empty() {
            return child;
        }
    }
    let mut child = FeatureSubset::empty(parent.len());
    child.insert(rng.random_range(0..parent.len()));
    child
}

/// Draws and evaluates the first parent and seeds the archive with it.
pub fn init_run(algorithm: Algorithm, config: &OptimizerConfig, evaluator: &Evaluator) -> Result<OptimizerState> {
    config.validate()?;
    let n = evaluator.n_features();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let subset = match algorithm {
        Algorithm::RandomSearch => uniform_mask(n, &mut rng),
        _ => match config.initial_subset_policy {
            InitialSubsetPolicy::Random => random_subset(n, &mut rng),
            InitialSubsetPolicy::Full => FeatureSubset::full(n),
        },
    };
    let objectives = evaluator.evaluate(&subset)?;
    let parent = ArchiveEntry::new(subset, objectives);
    let mut archive = Archive::new(config.archive_capacity, config.grid_depth);
    archive.try_add(parent.clone(), &mut rng);
    let model = match algorithm {
        Algorithm::Mmifs => Some(ProbabilityModel::uniform(n, config.model)?),
        _ => None,
    };
    Ok(OptimizerState {
        algorithm,
        r: parent.subset.count(),
        parent,
        archive,
        model,
        iteration: 0,
        rng,
        mutation_rate: config.mutation_rate.unwrap_or(1.0 / n as f64),
    })
}

impl OptimizerState {
    fn next_offspring(&mut self) -> Result<FeatureSubset> {
        match self.algorithm {
            Algorithm::Mmifs => {
                let model = self.model.as_ref().expect("mmifs state carries a model");
                model.generate_offspring(self.r, &mut self.rng)
            }
            Algorithm::BlindPaes => Ok(bitwise_mutation(&self.parent.subset, self.mutation_rate, &mut self.rng)),
            Algorithm::RandomSearch => Ok(uniform_mask(self.parent.subset.len(), &mut self.rng)),
        }
    }
}

/// One iteration: generate an offspring and run it through the acceptance
/// logic.
pub fn step(state: &mut OptimizerState, evaluator: &Evaluator) -> Result<IterationLog> {
    let offspring = state.next_offspring()?;
    step_with_offspring(state, evaluator, offspring)
}

/// One iteration with a caller-supplied offspring.
///
/// The winner is whichever individual the acceptance logic keeps; the loser
/// is the other one, and for accepted offspring that is always the parent as
/// it was before replacement.
pub fn step_with_offspring(
    state: &mut OptimizerState,
    evaluator: &Evaluator,
    offspring: FeatureSubset,
) -> Result<IterationLog> {
    state.iteration += 1;
    let (objectives, cached) = evaluator.evaluate_tracked(&offspring)?;
    let off = ArchiveEntry::new(offspring, objectives);
    let old_parent = state.parent.clone();

    if state.algorithm == Algorithm::RandomSearch {
        let outcome = state.archive.try_add(off.clone(), &mut state.rng);
        return Ok(IterationLog {
            iteration: state.iteration,
            branch: Branch::Sample,
            archive_outcome: Some(outcome),
            parent_err: old_parent.objectives.error_pct,
            parent_k: old_parent.objectives.n_selected,
            off_err: off.objectives.error_pct,
            off_k: off.objectives.n_selected,
            cached,
            winner: None,
            winner_k: None,
            loser_k: None,
            parent_changed: false,
            r: state.r,
            archive_size: state.archive.len(),
        });
    }

    let (branch, outcome, accepted) =
        if dominates(&old_parent.objectives, &off.objectives) == Dominance::FirstDominates {
            (Branch::ParentDominates, None, false)
        } else if state.archive.dominated_by_any(&off.objectives) {
            (Branch::DominatedByArchive, Some(AddOutcome::DominatedByArchive), false)
        } else {
            let outcome = state.archive.try_add(off.clone(), &mut state.rng);
            match outcome {
                AddOutcome::Added { displaced } if displaced > 0 => (Branch::DominatesArchive, Some(outcome), true),
                _ => {
                    let accept = if dominates(&off.objectives, &old_parent.objectives) == Dominance::FirstDominates {
                        // only reachable once the parent has left the archive
                        true
                    } else {
                        let grid = state.archive.grid_with(&[&off, &old_parent]);
                        let off_crowd = grid.occupancy(grid.cell(&off.objectives));
                        let parent_crowd = grid.occupancy(grid.cell(&old_parent.objectives));
                        off_crowd < parent_crowd
                    };
                    (Branch::NonDominated, Some(outcome), accept)
                }
            }
        };

    let (winner, loser, side) = if accepted {
        state.parent = off.clone();
        (&off, &old_parent, Side::Offspring)
    } else {
        (&old_parent, &off, Side::Parent)
    };
    if let Some(model) = state.model.as_mut() {
        model.update(&winner.subset, &loser.subset)?;
    }
    state.r = winner.subset.count();

    Ok(IterationLog {
        iteration: state.iteration,
        branch,
        archive_outcome: outcome,
        parent_err: old_parent.objectives.error_pct,
        parent_k: old_parent.objectives.n_selected,
        off_err: off.objectives.error_pct,
        off_k: off.objectives.n_selected,
        cached,
        winner: Some(side),
        winner_k: Some(winner.subset.count()),
        loser_k: Some(loser.subset.count()),
        parent_changed: accepted,
        r: state.r,
        archive_size: state.archive.len(),
    })
}

/// Everything needed to audit or reproduce one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub algorithm: Algorithm,
    pub dataset: String,
    pub n_features: usize,
    pub config: OptimizerConfig,
    /// Archive at termination, sorted by `(n_selected, error_pct)`.
    pub front: Vec<ArchiveEntry>,
    pub iterations: Vec<IterationLog>,
    /// Distinct subsets evaluated (cache misses).
    pub eval_count: u64,
    /// Evaluate calls including cache hits.
    pub call_count: u64,
    pub iteration_count: u64,
    /// False when the iteration cap stopped the run first.
    pub budget_exhausted: bool,
    pub wall_time_ms: f64,
}

impl RunRecord {
    pub fn front_objectives(&self) -> Vec<Objectives> {
        self.front.iter().map(|e| e.objectives).collect()
    }

    /// Compact JSON; the iteration log dominates the size.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let record: Self = serde_json::from_str(s)?;
        if record.schema_version != RECORD_SCHEMA_VERSION {
            return Err(Error::InvalidParameter(format!(
                "unsupported run record schema_version {}",
                record.schema_version
            )));
        }
        Ok(record)
    }

    /// `iter,branch,parent_err,parent_k,off_err,off_k,r` rows.
    pub fn write_log_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::InvalidParameter(format!("log csv: {e}"));
        w.write_record(["iter", "branch", "parent_err", "parent_k", "off_err", "off_k", "r"])
            .map_err(csv_err)?;
        for it in &self.iterations {
            w.write_record([
                it.iteration.to_string(),
                it.branch.label().to_string(),
                it.parent_err.to_string(),
                it.parent_k.to_string(),
                it.off_err.to_string(),
                it.off_k.to_string(),
                it.r.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io("log csv", e))?;
        Ok(())
    }
}

/// Runs `algorithm` until the evaluation budget (or the iteration cap) is
/// spent. The evaluation cache lives for this run only.
pub fn run(algorithm: Algorithm, config: &OptimizerConfig, split: &SplitPair) -> Result<RunRecord> {
    config.validate()?;
    let started = Instant::now();
    let evaluator = Evaluator::new(split, config.knn_k, config.fitness)?;
    let mut state = init_run(algorithm, config, &evaluator)?;
    let mut iterations = Vec::new();
    let cap = config.iteration_cap();
    while evaluator.eval_count() < config.max_evaluations && state.iteration < cap {
        iterations.push(step(&mut state, &evaluator)?);
    }
    Ok(RunRecord {
        schema_version: RECORD_SCHEMA_VERSION,
        algorithm,
        dataset: split.train.name().to_string(),
        n_features: evaluator.n_features(),
        config: config.clone(),
        front: state.archive.sorted_entries(),
        iterations,
        eval_count: evaluator.eval_count(),
        call_count: evaluator.call_count(),
        iteration_count: state.iteration,
        budget_exhausted: evaluator.eval_count() >= config.max_evaluations,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn run_mmifs(config: &OptimizerConfig, split: &SplitPair) -> Result<RunRecord> {
    run(Algorithm::Mmifs, config, split)
}

pub fn run_blind_paes(config: &OptimizerConfig, split: &SplitPair) -> Result<RunRecord> {
    run(Algorithm::BlindPaes, config, split)
}

pub fn run_random_search(config: &OptimizerConfig, split: &SplitPair) -> Result<RunRecord> {
    run(Algorithm::RandomSearch, config, split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;

    /// Feature 0 carries the label, features 1..n are noise.
    fn fixture(n: usize) -> SplitPair {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..60 {
            let c = i % 2;
            let mut row = vec![c as f64 + 0.01 * (i % 5) as f64];
            row.extend((1..n).map(|j| ((i * 7 + j * 13) % 11) as f64 / 11.0));
            rows.push(row);
            labels.push(c);
        }
        let d = Dataset::new("fixture", rows, labels).unwrap();
        crate::dataset::stratified_split(&d, 0.75, 0).unwrap()
    }

    fn config(max_evaluations: u64) -> OptimizerConfig {
        OptimizerConfig {
            max_evaluations,
            knn_k: 3,
            seed: 11,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn init_is_deterministic_and_seeds_archive() {
        let split = fixture(6);
        let ev = Evaluator::new(&split, 3, FitnessMode::TestSplit).unwrap();
        let a = init_run(Algorithm::Mmifs, &config(10), &ev).unwrap();
        let b = init_run(Algorithm::Mmifs, &config(10), &ev).unwrap();
        assert_eq!(a.parent, b.parent);
        assert_eq!(a.archive.entries(), std::slice::from_ref(&a.parent));
        assert_eq!(a.r, a.parent.subset.count());
    }

    #[test]
    fn dominated_offspring_takes_branch_one() {
        let split = fixture(6);
        let ev = Evaluator::new(&split, 3, FitnessMode::TestSplit).unwrap();
        let mut cfg = config(10);
        cfg.initial_subset_policy = InitialSubsetPolicy::Random;
        let mut state = init_run(Algorithm::Mmifs, &cfg, &ev).unwrap();
        // force the informative feature alone as parent
        let best = FeatureSubset::from_indices(6, [0]).unwrap();
        let best_obj = ev.evaluate(&best).unwrap();
        assert_eq!(best_obj.error_pct, 0.0);
        state.parent = ArchiveEntry::new(best.clone(), best_obj);
        state.archive = Archive::new(10, 4);
        state.archive.try_add(state.parent.clone(), &mut state.rng);

        let worse = FeatureSubset::from_indices(6, [1, 2, 3]).unwrap();
        let log = step_with_offspring(&mut state, &ev, worse.clone()).unwrap();
        assert_eq!(log.branch, Branch::ParentDominates);
        assert_eq!(log.winner, Some(Side::Parent));
        assert!(!log.parent_changed);
        assert_eq!(state.parent.subset, best);
        assert_eq!(state.r, 1);
        let sv = state.model.as_ref().unwrap().sv.as_slice().to_vec();
        assert!(sv[0] > 1.0);
        assert!(sv[1] < 1.0 && sv[2] < 1.0 && sv[3] < 1.0);
        assert_eq!(sv[4], 1.0);
    }

    #[test]
    fn dominating_offspring_collapses_archive() {
        let split = fixture(6);
        let ev = Evaluator::new(&split, 3, FitnessMode::TestSplit).unwrap();
        let mut state = init_run(Algorithm::Mmifs, &config(10), &ev).unwrap();
        state.archive = Archive::new(10, 4);
        for s in [[1usize, 2].as_slice(), &[3, 4, 5], &[1, 2, 3, 4, 5]] {
            let sub = FeatureSubset::from_indices(6, s.iter().copied()).unwrap();
            let o = ev.evaluate(&sub).unwrap();
            state.archive.try_add(ArchiveEntry::new(sub, o), &mut state.rng);
        }
        let p = state.archive.entries()[0].clone();
        state.parent = p;
        let best = FeatureSubset::from_indices(6, [0]).unwrap();
        let log = step_with_offspring(&mut state, &ev, best.clone()).unwrap();
        assert_eq!(log.branch, Branch::DominatesArchive);
        assert_eq!(state.archive.len(), 1);
        assert_eq!(state.parent.subset, best);
        assert_eq!(state.r, 1);
    }

    #[test]
    fn offspring_equal_to_parent_leaves_model_alone() {
        let split = fixture(6);
        let ev = Evaluator::new(&split, 3, FitnessMode::TestSplit).unwrap();
        let mut state = init_run(Algorithm::Mmifs, &config(10), &ev).unwrap();
        let before = state.model.clone();
        let same = state.parent.subset.clone();
        let log = step_with_offspring(&mut state, &ev, same).unwrap();
        assert_eq!(log.winner, Some(Side::Parent));
        assert!(!log.parent_changed);
        assert!(log.cached);
        assert_eq!(state.model, before);
    }

    #[test]
    fn budget_of_two_evaluates_one_offspring() {
        let split = fixture(6);
        let rec = run_mmifs(&config(2), &split).unwrap();
        assert_eq!(rec.eval_count, 2);
        assert!(rec.iterations.iter().filter(|it| !it.cached).count() == 1);
    }

    #[test]
    fn runs_are_deterministic() {
        let split = fixture(8);
        for alg in Algorithm::ALL {
            let a = run(alg, &config(60), &split).unwrap();
            let b = run(alg, &config(60), &split).unwrap();
            assert_eq!(a.front, b.front, "{alg}");
            assert_eq!(a.iterations, b.iterations, "{alg}");
        }
    }

    #[test]
    fn mutation_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p: FeatureSubset = "0110".parse().unwrap();
        assert_eq!(bitwise_mutation(&p, 0.0, &mut rng), p);
        assert_eq!(bitwise_mutation(&p, 1.0, &mut rng), p.complement());
        let full = FeatureSubset::full(4);
        assert_eq!(bitwise_mutation(&full, 1.0, &mut rng).count(), 1);
    }

    #[test]
    fn blind_paes_with_zero_rate_keeps_parent() {
        let split = fixture(6);
        let cfg = OptimizerConfig {
            mutation_rate: Some(0.0),
            max_iterations: Some(50),
            ..config(10)
        };
        let rec = run_blind_paes(&cfg, &split).unwrap();
        assert_eq!(rec.front.len(), 1);
        assert_eq!(rec.eval_count, 1);
        assert!(!rec.budget_exhausted);
        assert_eq!(rec.iteration_count, 50);
    }

    #[test]
    fn random_search_spends_exact_budget_and_matches_oracle() {
        let split = fixture(12);
        let cfg = config(40);
        let rec = run_random_search(&cfg, &split).unwrap();
        assert_eq!(rec.eval_count, 40);
        assert!(rec.iterations.iter().all(|it| it.branch == Branch::Sample));

        // replay the same state machine, collecting every sampled point
        let ev = Evaluator::new(&split, cfg.knn_k, cfg.fitness).unwrap();
        let mut state = init_run(Algorithm::RandomSearch, &cfg, &ev).unwrap();
        let mut all = vec![state.parent.clone()];
        while ev.eval_count() < cfg.max_evaluations {
            let child = state.next_offspring().unwrap();
            let o = ev.evaluate(&child).unwrap();
            all.push(ArchiveEntry::new(child.clone(), o));
            step_with_offspring(&mut state, &ev, child).unwrap();
        }
        let oracle: Vec<Objectives> = all
            .iter()
            .filter(|a| !all.iter().any(|b| dominates(&b.objectives, &a.objectives) == Dominance::FirstDominates))
            .map(|a| a.objectives)
            .collect();
        let mut got: Vec<(usize, u64)> = rec
            .front
            .iter()
            .map(|e| (e.objectives.n_selected, e.objectives.error_pct.to_bits()))
            .collect();
        let mut want: Vec<(usize, u64)> = oracle.iter().map(|o| (o.n_selected, o.error_pct.to_bits())).collect();
        want.sort();
        want.dedup();
        got.sort();
        got.dedup();
        assert_eq!(got, want);
    }
}
