//! Identification of discrete Urysohn operators and Urysohn trees from
//! input-output records.
//!
//! A discrete Urysohn operator maps `m` scalars to one scalar as a sum of
//! `m` univariate piecewise-linear functions. A Urysohn tree stacks a layer
//! of branch operators under a single root operator; with `2m+1` branches
//! it realises the Kolmogorov-Arnold representation of a continuous
//! multivariate function. Both model kinds are identified from records by
//! Kaczmarz projection descent: each record projects the nodal values onto
//! its constraint hyperplane, no matrices are ever assembled.
//!
//! The crate is organised as:
//!
//! - [`pwl`] — piecewise-linear functions and Urysohn operators,
//! - [`train`] — single-operator identification,
//! - [`tree`] — Urysohn-tree identification over hidden auxiliary variables,
//! - [`data`] — dataset ingestion, encoding, windowing and splitting,
//! - [`metrics`] — Pearson, normalised RMSE, classification errors, CIs,
//! - [`store`] — exact text serialisation of trained models,
//! - [`runner`] — train / cross-validation / select-best protocols,
//! - [`bench`] — pinned benchmark experiments with reference bands.

// Negated comparisons like `!(hi > lo)` are NaN guards: they reject both a
// wrong ordering and non-finite garbage in one test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod data;
pub mod metrics;
pub mod pwl;
pub mod runner;
pub mod store;
pub mod train;
pub mod tree;

pub use data::{ColumnKind, ColumnRole, ColumnSpec, Dataset, FoldPlan, ParseOptions};
pub use metrics::{ConfidenceInterval, EvalReport};
pub use pwl::{InputSpec, PiecewiseLinear, SegmentLocation, UrysohnOperator};
pub use bench::{
    run_all, run_experiment, table_csv, table_text, Check, ExperimentOutcome, ExperimentStatus,
    EXPERIMENTS,
};
pub use runner::{
    derive_seed, evaluate, predictions, run_cv, run_holdout, run_select, train_model, CvReport,
    Model, ModelConfig, ModelForm, ModelKind, NodeCounts, SelectReport,
};
pub use train::{kaczmarz_step, train_single, TrainConfig, TrainData, TrainTrace};
pub use tree::{initialize_tree, train_tree, tree_step, TreeConfig, UrysohnTree};

/// Errors reported by dataset ingestion, configuration validation, model
/// storage and the benchmark harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("model store: {0}")]
    Store(String),
    #[error("benchmark: {0}")]
    Bench(String),
}

pub type Result<T> = std::result::Result<T, Error>;
