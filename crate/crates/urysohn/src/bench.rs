//! Scripted benchmark experiments with pinned configurations and expected
//! result bands — the repository's end-to-end regression suite.
//!
//! Six named experiments exist: `synthetic` and `reduction` run entirely on
//! generated data; `airfoil`, `mushroom`, `wiener-hammerstein` and `churn`
//! need public dataset files placed under the data directory (the
//! `URYSOHN_DATA_DIR` environment variable, default `./data` — see the
//! README for the download sources). A missing file is reported as
//! *fetch required*, never as a failure.
//!
//! Every experiment is a pure function of its pinned config, the dataset
//! bytes and the seeds: metrics are compared against a reference band
//! (the expected central value with a tolerance wide enough to absorb
//! seed- and ordering-level variation), and the outcome lists one check
//! per bound. Dataset files are fingerprinted with SHA-256 on first use
//! and verified against the recorded fingerprint ever after, so a silently
//! changed file cannot masquerade as the original.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::data::{parse_csv, read_two_series, synth_generate, window_siso, Dataset, ParseOptions};
use crate::runner::{run_cv, run_holdout, run_select, ModelConfig, ModelKind, NodeCounts};
use crate::{Error, Result};

/// Names accepted by [`run_experiment`], in canonical order.
pub const EXPERIMENTS: [&str; 6] =
    ["synthetic", "reduction", "airfoil", "mushroom", "wiener-hammerstein", "churn"];

/// One bounded metric of an experiment.
#[derive(Debug, Clone)]
pub struct Check {
    /// Metric label, e.g. `tree_pearson`.
    pub label: String,
    /// Measured value.
    pub value: f64,
    /// Inclusive acceptance bounds.
    pub lo: f64,
    pub hi: f64,
    /// Expected central value the band was built around.
    pub reference: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value.is_finite() && self.value >= self.lo && self.value <= self.hi
    }
}

/// Verdict of one experiment run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentStatus {
    Passed,
    Failed,
    /// The dataset file is absent; nothing was measured.
    FetchRequired,
}

/// Everything [`run_experiment`] reports back.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub name: &'static str,
    pub status: ExperimentStatus,
    pub checks: Vec<Check>,
    /// Human-readable context: timings, dataset fingerprints, fetch
    /// instructions.
    pub notes: Vec<String>,
}

impl ExperimentOutcome {
    fn from_checks(name: &'static str, checks: Vec<Check>, notes: Vec<String>) -> Self {
        let status = if checks.iter().all(Check::passed) {
            ExperimentStatus::Passed
        } else {
            ExperimentStatus::Failed
        };
        ExperimentOutcome { name, status, checks, notes }
    }

    fn fetch_required(name: &'static str, notes: Vec<String>) -> Self {
        ExperimentOutcome { name, status: ExperimentStatus::FetchRequired, checks: Vec::new(), notes }
    }
}

/// Directory holding the fetched dataset files: `URYSOHN_DATA_DIR` when
/// set, `./data` otherwise.
pub fn data_dir() -> PathBuf {
    std::env::var_os("URYSOHN_DATA_DIR").map(PathBuf::from).unwrap_or_else(|| "data".into())
}

fn sha256_hex(path: &Path) -> Result<String> {
    use sha2::{Digest, Sha256};
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

/// Verify `file_name` inside `dir` against the `CHECKSUMS` manifest,
/// recording its SHA-256 on first use. Returns a note describing what
/// happened; errors if the file no longer matches its recorded digest.
fn verify_checksum(dir: &Path, file_name: &str) -> Result<String> {
    let digest = sha256_hex(&dir.join(file_name))?;
    let manifest = dir.join("CHECKSUMS");
    if manifest.exists() {
        for line in std::fs::read_to_string(&manifest)?.lines() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() == 2 && fields[1] == file_name {
                return if fields[0] == digest {
                    Ok(format!("{file_name}: sha256 verified ({digest})"))
                } else {
                    Err(Error::Bench(format!(
                        "{file_name}: sha256 {digest} does not match the recorded {}; \
                         remove its CHECKSUMS line if the replacement is intentional",
                        fields[0]
                    )))
                };
            }
        }
    }
    let mut text = if manifest.exists() { std::fs::read_to_string(&manifest)? } else { String::new() };
    if !text.is_empty() && !text.ends_with('\n') {
        text.push('\n');
    }
    text.push_str(&format!("{digest}  {file_name}\n"));
    std::fs::write(&manifest, text)?;
    Ok(format!("{file_name}: sha256 recorded on first use ({digest})"))
}

/// Open a fetched dataset file: `Ok(None)` with instructions when absent,
/// the checksum note when present.
fn fetched_file(file_name: &str) -> Result<std::result::Result<(PathBuf, String), Vec<String>>> {
    let dir = data_dir();
    let path = dir.join(file_name);
    if !path.exists() {
        return Ok(Err(vec![
            format!("dataset file {} not found", path.display()),
            "download it as described in the README (Benchmark datasets) and rerun".into(),
        ]));
    }
    let note = verify_checksum(&dir, file_name)?;
    Ok(Ok((path, note)))
}

fn structural(check: bool, message: String) -> Result<()> {
    if check {
        Ok(())
    } else {
        Err(Error::Bench(message))
    }
}

// ---------------------------------------------------------------------------
// Pinned experiment parameters.
//
// The generators and trainers are deterministic, so these constants pin the
// entire runs. Training settings were calibrated once on generated data
// (and, for the fetched datasets, on generated stand-ins of the same shape)
// and are frozen; they are deliberately not exposed as knobs here so that a
// benchmark verdict always refers to one exact computation.
// ---------------------------------------------------------------------------

const SYNTH_RECORDS: usize = 4000;
const SYNTH_SEED: u64 = 20260401;

fn synthetic_dataset() -> Dataset {
    synth_generate(SYNTH_RECORDS, SYNTH_SEED)
}

fn synthetic_tree_config() -> ModelConfig {
    ModelConfig::new(ModelKind::Tree)
        .with_addends(11)
        .with_nodes(NodeCounts::Uniform(10))
        .with_root_nodes(10)
        .with_alpha(0.5)
        .with_mu(1.0)
        .with_epochs(30)
        .with_seed(1)
}

fn synthetic_single_config() -> ModelConfig {
    ModelConfig::new(ModelKind::Single)
        .with_nodes(NodeCounts::Uniform(10))
        .with_alpha(0.1)
        .with_epochs(40)
        .with_seed(1)
}

fn synthetic_linear_config() -> ModelConfig {
    ModelConfig::new(ModelKind::Linear).with_alpha(0.5).with_epochs(100).with_seed(1)
}

/// Synthetic five-input function: full tree against the reference band,
/// plus the linear and single-operator baselines on the same records.
fn run_synthetic(jobs: Option<usize>) -> Result<ExperimentOutcome> {
    let dataset = synthetic_dataset();
    let started = Instant::now();
    let tree = run_cv(&dataset, &synthetic_tree_config(), 10, 5, jobs)?;
    let single = run_cv(&dataset, &synthetic_single_config(), 10, 5, jobs)?;
    let linear = run_cv(&dataset, &synthetic_linear_config(), 10, 5, jobs)?;
    let elapsed = started.elapsed().as_secs_f64();
    let checks = vec![
        Check {
            label: "tree_pearson".into(),
            value: tree.pearson().mean,
            lo: 0.985,
            hi: 1.0,
            reference: 0.9935,
        },
        Check {
            label: "tree_nrmse".into(),
            value: tree.nrmse().mean,
            lo: 0.0,
            hi: 0.027,
            reference: 0.0203,
        },
        Check {
            label: "single_pearson".into(),
            value: single.pearson().mean,
            lo: 0.91,
            hi: 0.95,
            reference: 0.93,
        },
        Check {
            label: "linear_pearson".into(),
            value: linear.pearson().mean,
            lo: 0.86,
            hi: 0.90,
            reference: 0.88,
        },
        Check { label: "runtime_s".into(), value: elapsed, lo: 0.0, hi: 120.0, reference: 120.0 },
    ];
    let notes = vec![
        format!("{SYNTH_RECORDS} generated records, seed {SYNTH_SEED}"),
        format!("tree pearson {}", tree.pearson()),
        format!("tree nrmse {}", tree.nrmse()),
        format!("single pearson {}", single.pearson()),
        format!("linear pearson {}", linear.pearson()),
        format!("wall time {elapsed:.1} s"),
    ];
    Ok(ExperimentOutcome::from_checks("synthetic", checks, notes))
}

/// Addend counts exercised by the reduction study, with the expected
/// Pearson value for each.
const REDUCTION_STEPS: [(usize, f64); 5] =
    [(1, 0.88), (2, 0.93), (3, 0.96), (6, 0.98), (11, 0.98)];

/// Reduction study: Pearson as a function of the addend count `K` on the
/// synthetic records; the trend must be non-decreasing within noise.
///
/// All five models share one training config. Its noise-reduction
/// fraction is gentler than the headline run's: the curve is meant to
/// show how accuracy falls away as addends are removed under a fixed
/// moderate training budget, and this setting reproduces the expected
/// shape across the whole ladder.
fn run_reduction(jobs: Option<usize>) -> Result<ExperimentOutcome> {
    let dataset = synthetic_dataset();
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let mut measured = Vec::new();
    let started = Instant::now();
    for (addends, reference) in REDUCTION_STEPS {
        let cfg = synthetic_tree_config().with_addends(addends).with_mu(0.7);
        let cv = run_cv(&dataset, &cfg, 10, 5, jobs)?;
        let pearson = cv.pearson().mean;
        measured.push(pearson);
        // The two largest models are bounded from below only; the small
        // ones must also not overshoot their expected accuracy.
        let (lo, hi) = if addends >= 6 { (0.96, 1.0) } else { (reference - 0.02, reference + 0.02) };
        checks.push(Check { label: format!("pearson_k{addends}"), value: pearson, lo, hi, reference });
        notes.push(format!("K={addends}: pearson {}", cv.pearson()));
    }
    let worst_step = measured
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    checks.push(Check {
        label: "monotone_step".into(),
        value: worst_step,
        lo: -0.01,
        hi: 1.0,
        reference: 0.0,
    });
    // Six addends already match the full model: the last rung of the
    // ladder is flat to within a point of correlation.
    checks.push(Check {
        label: "k6_k11_gap".into(),
        value: (measured[4] - measured[3]).abs(),
        lo: 0.0,
        hi: 0.01,
        reference: 0.005,
    });
    notes.push(format!("wall time {:.1} s", started.elapsed().as_secs_f64()));
    Ok(ExperimentOutcome::from_checks("reduction", checks, notes))
}

/// Airfoil self-noise: train/selection/test protocol with ten candidate
/// models, reporting the winner's test-subset Pearson correlation.
fn run_airfoil(jobs: Option<usize>) -> Result<ExperimentOutcome> {
    let (path, checksum_note) = match fetched_file("airfoil_self_noise.dat")? {
        Ok(found) => found,
        Err(notes) => return Ok(ExperimentOutcome::fetch_required("airfoil", notes)),
    };
    let dataset = parse_csv(&path, &ParseOptions::default())?;
    structural(
        dataset.record_count() == 1503 && dataset.input_len() == 5,
        format!(
            "airfoil data should hold 1503 records of 5 inputs, found {} of {}",
            dataset.record_count(),
            dataset.input_len()
        ),
    )?;
    let cfg = ModelConfig::new(ModelKind::Tree)
        .with_addends(11)
        .with_nodes(NodeCounts::Uniform(15))
        .with_root_nodes(15)
        .with_alpha(0.1)
        .with_mu(0.2)
        .with_epochs(40)
        .with_seed(7);
    let started = Instant::now();
    let (_, report) = run_select(&dataset, &cfg, (0.6, 0.2, 0.2), 10, jobs)?;
    let elapsed = started.elapsed().as_secs_f64();
    let checks = vec![Check {
        label: "test_pearson".into(),
        value: report.test.pearson,
        lo: 0.93,
        hi: 1.0,
        reference: 0.9506,
    }];
    let notes = vec![
        checksum_note,
        format!("winner: candidate {} of 10", report.best + 1),
        format!("test pearson {:.4} over {} records", report.test.pearson, report.test.count),
        format!("wall time {elapsed:.1} s"),
    ];
    Ok(ExperimentOutcome::from_checks("airfoil", checks, notes))
}

/// Mushroom classification: a single quantized operator under repeated
/// 10-fold cross-validation, scored by misclassified records.
fn run_mushroom(jobs: Option<usize>) -> Result<ExperimentOutcome> {
    let (path, checksum_note) = match fetched_file("agaricus-lepiota.data")? {
        Ok(found) => found,
        Err(notes) => return Ok(ExperimentOutcome::fetch_required("mushroom", notes)),
    };
    let options = ParseOptions { output_column: Some(1), ..ParseOptions::default() };
    let dataset = parse_csv(&path, &options)?;
    structural(
        dataset.record_count() == 8124 && dataset.input_len() == 22 && dataset.is_classification(),
        format!(
            "mushroom data should hold 8124 records of 22 categorical inputs and a \
             two-level output, found {} of {}",
            dataset.record_count(),
            dataset.input_len()
        ),
    )?;
    let cfg = ModelConfig::new(ModelKind::Single)
        .with_alpha(0.5)
        .with_epochs(20)
        .with_seed(3);
    let started = Instant::now();
    let cv = run_cv(&dataset, &cfg, 10, 10, jobs)?;
    let elapsed = started.elapsed().as_secs_f64();
    let per_cv = elapsed / 10.0;
    let checks = vec![
        Check {
            label: "mean_errors".into(),
            value: cv.errors().mean,
            lo: 0.0,
            hi: 10.0,
            reference: 3.60,
        },
        Check { label: "cv_runtime_s".into(), value: per_cv, lo: 0.0, hi: 30.0, reference: 2.0 },
    ];
    let notes = vec![
        checksum_note,
        format!("errors per repeat {} of 8124", cv.errors()),
        format!("one 10-fold pass took {per_cv:.1} s ({elapsed:.1} s for 10)"),
    ];
    Ok(ExperimentOutcome::from_checks("mushroom", checks, notes))
}

/// Wiener-Hammerstein circuit: windowed SISO records, first half training
/// and second half validation, for the tree, single and linear models.
fn run_wiener_hammerstein(jobs: Option<usize>) -> Result<ExperimentOutcome> {
    let (path, checksum_note) = match fetched_file("wiener_hammerstein.csv")? {
        Ok(found) => found,
        Err(notes) => return Ok(ExperimentOutcome::fetch_required("wiener-hammerstein", notes)),
    };
    let (input, output) = read_two_series(&path)?;
    structural(
        input.len() == 188000,
        format!("the benchmark series should hold 188000 samples, found {}", input.len()),
    )?;
    let dataset = window_siso(&input, &output, 35)?;
    let _ = jobs; // the three models train sequentially on one split each
    let tree_cfg = ModelConfig::new(ModelKind::Tree)
        .with_addends(4)
        .with_nodes(NodeCounts::Uniform(16))
        .with_root_nodes(16)
        .with_alpha(0.1)
        .with_mu(0.2)
        .with_epochs(15)
        .with_seed(12);
    let single_cfg = ModelConfig::new(ModelKind::Single)
        .with_nodes(NodeCounts::Uniform(16))
        .with_alpha(0.2)
        .with_epochs(15)
        .with_seed(12);
    let linear_cfg =
        ModelConfig::new(ModelKind::Linear).with_alpha(0.2).with_epochs(15).with_seed(12);
    let started = Instant::now();
    let (_, tree) = run_holdout(&dataset, &tree_cfg, 0.5, false)?;
    let (_, single) = run_holdout(&dataset, &single_cfg, 0.5, false)?;
    let (_, linear) = run_holdout(&dataset, &linear_cfg, 0.5, false)?;
    let elapsed = started.elapsed().as_secs_f64();
    let checks = vec![
        Check { label: "tree_nrmse".into(), value: tree.nrmse, lo: 0.0, hi: 0.025, reference: 0.0150 },
        Check {
            label: "single_nrmse".into(),
            value: single.nrmse,
            lo: 0.0,
            hi: 0.025,
            reference: 0.0152,
        },
        Check {
            label: "linear_nrmse".into(),
            value: linear.nrmse,
            lo: 0.022,
            hi: 0.042,
            reference: 0.032,
        },
    ];
    let notes = vec![
        checksum_note,
        format!("windowed to {} records of 35 lags", dataset.record_count()),
        format!(
            "validation nrmse: tree {:.4}, single {:.4}, linear {:.4}",
            tree.nrmse, single.nrmse, linear.nrmse
        ),
        format!("wall time {elapsed:.1} s"),
    ];
    Ok(ExperimentOutcome::from_checks("wiener-hammerstein", checks, notes))
}

/// Indices of the identifier columns to drop from a churn file, located by
/// header name when a header exists, by the known layouts otherwise.
fn churn_ignored_columns(path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path)?;
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let (comma, semi) = (
        first.bytes().filter(|&b| b == b',').count(),
        first.bytes().filter(|&b| b == b';').count(),
    );
    let delimiter = if semi > comma { ';' } else { ',' };
    let fields: Vec<&str> = first.split(delimiter).map(str::trim).collect();
    let named: Vec<usize> = fields
        .iter()
        .enumerate()
        .filter(|(_, f)| matches!(**f, "RowNumber" | "CustomerId" | "Surname"))
        .map(|(i, _)| i + 1)
        .collect();
    if !named.is_empty() {
        return Ok(named);
    }
    match fields.len() {
        14 => Ok(vec![1, 2, 3]), // RowNumber, CustomerId, Surname
        12 => Ok(vec![1]),       // CustomerId only
        n => Err(Error::Bench(format!(
            "churn data should have 12 or 14 columns, found {n}"
        ))),
    }
}

/// Bank churn: a reduced tree over mixed categorical/continuous inputs,
/// scored by classification accuracy under repeated 10-fold CV.
fn run_churn(jobs: Option<usize>) -> Result<ExperimentOutcome> {
    let (path, checksum_note) = match fetched_file("Churn_Modelling.csv")? {
        Ok(found) => found,
        Err(notes) => return Ok(ExperimentOutcome::fetch_required("churn", notes)),
    };
    let options = ParseOptions {
        ignored_columns: churn_ignored_columns(&path)?,
        binary_output: true,
        ..ParseOptions::default()
    };
    let dataset = parse_csv(&path, &options)?;
    structural(
        dataset.record_count() == 10000 && dataset.input_len() == 10 && dataset.is_classification(),
        format!(
            "churn data should hold 10000 records of 10 inputs and a binary output, \
             found {} of {}",
            dataset.record_count(),
            dataset.input_len()
        ),
    )?;
    // Node counts per input, all within 2..=6: CreditScore, Geography,
    // Gender, Age, Tenure, Balance, NumOfProducts, HasCrCard,
    // IsActiveMember, EstimatedSalary (categorical entries are ignored by
    // the trainer, which always uses one node per level there).
    let nodes = NodeCounts::PerInput(vec![6, 3, 2, 6, 5, 6, 4, 2, 2, 6]);
    let cfg = ModelConfig::new(ModelKind::Tree)
        .with_addends(3)
        .with_nodes(nodes)
        .with_root_nodes(6)
        .with_alpha(0.05)
        .with_mu(0.2)
        .with_epochs(20)
        .with_seed(5);
    let started = Instant::now();
    let cv = run_cv(&dataset, &cfg, 10, 10, jobs)?;
    let elapsed = started.elapsed().as_secs_f64();
    let checks = vec![Check {
        label: "accuracy".into(),
        value: cv.accuracy().mean,
        lo: 0.78,
        hi: 1.0,
        reference: 0.810,
    }];
    let notes = vec![
        checksum_note,
        format!("accuracy {}", cv.accuracy()),
        format!("errors per repeat {} of 10000", cv.errors()),
        format!("wall time {elapsed:.1} s"),
    ];
    Ok(ExperimentOutcome::from_checks("churn", checks, notes))
}

/// Run one experiment by name. Unknown names list the known ones.
pub fn run_experiment(name: &str, jobs: Option<usize>) -> Result<ExperimentOutcome> {
    match name {
        "synthetic" => run_synthetic(jobs),
        "reduction" => run_reduction(jobs),
        "airfoil" => run_airfoil(jobs),
        "mushroom" => run_mushroom(jobs),
        "wiener-hammerstein" => run_wiener_hammerstein(jobs),
        "churn" => run_churn(jobs),
        other => Err(Error::Config(format!(
            "unknown experiment {other:?} (expected one of {})",
            EXPERIMENTS.join(", ")
        ))),
    }
}

/// Run every experiment in canonical order.
pub fn run_all(jobs: Option<usize>) -> Result<Vec<ExperimentOutcome>> {
    EXPERIMENTS.iter().map(|name| run_experiment(name, jobs)).collect()
}

/// Plain-text comparison table of experiment outcomes.
pub fn table_text(outcomes: &[ExperimentOutcome]) -> String {
    let mut rows: Vec<[String; 6]> = vec![[
        "experiment".into(),
        "metric".into(),
        "measured".into(),
        "reference".into(),
        "band".into(),
        "verdict".into(),
    ]];
    for outcome in outcomes {
        if outcome.status == ExperimentStatus::FetchRequired {
            rows.push([
                outcome.name.into(),
                "-".into(),
                "-".into(),
                "-".into(),
                "-".into(),
                "fetch required".into(),
            ]);
            continue;
        }
        for check in &outcome.checks {
            rows.push([
                outcome.name.into(),
                check.label.clone(),
                format!("{:.4}", check.value),
                format!("{:.4}", check.reference),
                format!("[{:.4}, {:.4}]", check.lo, check.hi),
                if check.passed() { "pass".into() } else { "FAIL".into() },
            ]);
        }
    }
    let mut widths = [0usize; 6];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        for (i, (cell, width)) in row.iter().zip(widths).enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            if i + 1 < row.len() {
                for _ in cell.len()..width {
                    out.push(' ');
                }
            }
        }
        out.push('\n');
    }
    out
}

/// The same comparison as [`table_text`], as comma-separated values for
/// plotting.
pub fn table_csv(outcomes: &[ExperimentOutcome]) -> String {
    let mut out = String::from("experiment,metric,measured,reference,lo,hi,verdict\n");
    for outcome in outcomes {
        if outcome.status == ExperimentStatus::FetchRequired {
            out.push_str(&format!("{},,,,,,fetch required\n", outcome.name));
            continue;
        }
        for check in &outcome.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                outcome.name,
                check.label,
                check.value,
                check.reference,
                check.lo,
                check.hi,
                if check.passed() { "pass" } else { "fail" }
            ));
        }
    }
    out
}
