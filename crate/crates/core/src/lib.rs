//! Multi-objective interaction-aware feature selection.
//!
//! A (1+1) Pareto-archive loop whose offspring are sampled from a learned
//! model of per-feature significance and pairwise interaction, with subset
//! sizes drawn from a chi-square distribution centred on the current winner's
//! size. Fitness is a KNN wrapper: (classification error %, feature count),
//! both minimized.
//!
//! Modules:
//! - [`dataset`]: CSV loading, normalization, splitting, projection
//! - [`evaluator`]: KNN wrapper objectives and Pareto dominance
//! - [`model`]: significance vector / interaction matrix sampling and update
//! - [`archive`]: bounded non-dominated archive with adaptive grid
//! - [`optimizer`]: the main loop and the baseline searchers
//! - [`metrics`]: C-metric, hypervolume, Wilcoxon and Friedman tests
//! - [`experiment`]: config-driven batch runs, comparison and export

pub mod archive;
pub mod dataset;
pub mod error;
pub mod evaluator;
pub mod experiment;
pub mod metrics;
pub mod model;
pub mod optimizer;
pub mod subset;

pub use archive::{AddOutcome, Archive, ArchiveEntry};
pub use dataset::{Dataset, LabelColumn, SplitPair};
pub use error::{Error, Result};
pub use evaluator::{dominates, Dominance, Evaluator, FitnessMode, Objectives};
pub use model::{ModelParams, ProbabilityModel};
pub use optimizer::{Algorithm, OptimizerConfig, RunRecord};
pub use subset::FeatureSubset;
