//! Command-line front end for Urysohn operator and Urysohn tree
//! identification: dataset generation, training, cross-validation, the
//! train/selection/test protocol, prediction, and the pinned benchmark
//! experiments.
//!
//! Every run is fully determined by its options and seed; repeated
//! invocations produce byte-identical model files, reports and prediction
//! files. Options can come from a plain-text `key=value` config file
//! (`--config`), with explicit command-line flags taking precedence, so
//! an experiment can be checked in as a small diffable file.
//!
//! Exit codes: 0 on success, 1 on configuration or data errors, 2 when a
//! `--assert` bound fails.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use urysohn::data::{parse_csv, synth_generate, Dataset, ParseOptions};
use urysohn::metrics::EvalReport;
use urysohn::runner::all_indices;
use urysohn::{
    evaluate, predictions, run_all, run_cv, run_experiment, run_select, store, table_csv,
    table_text, train_model, CvReport, ExperimentOutcome, ExperimentStatus, ModelConfig,
    ModelKind, NodeCounts,
};

#[derive(Parser)]
#[command(
    name = "urysohn",
    version,
    about = "Identify discrete Urysohn operators and two-layer Urysohn trees from data",
    after_help = "Exit codes: 0 success, 1 config/data error, 2 failed --assert bound."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic five-input benchmark dataset as CSV
    Synth(SynthArgs),
    /// Train one model and write it to a model file
    Train(TrainArgs),
    /// k-fold cross-validation, repeated with derived seeds
    Cv(CvArgs),
    /// Train several candidates, pick the best on a selection subset,
    /// score it once on a held-out test subset
    Select(SelectArgs),
    /// Apply a saved model to a dataset
    Predict(PredictArgs),
    /// Run the pinned benchmark experiments
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Args)]
struct ConfigArg {
    /// Plain-text key=value file supplying defaults for the other flags
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DataArgs {
    /// Input dataset (CSV; delimiter and header auto-detected)
    #[arg(long, value_name = "FILE")]
    data: Option<PathBuf>,
    /// Field delimiter: a single character, or the word "tab"
    #[arg(long, value_name = "CHAR")]
    delimiter: Option<String>,
    /// Whether the first row is a header (auto-detected when absent)
    #[arg(long, value_name = "BOOL")]
    header: Option<bool>,
    /// One-based output column (default: the last column)
    #[arg(long, value_name = "N")]
    output_column: Option<usize>,
    /// One-based columns to drop, comma-separated
    #[arg(long, value_name = "N,N,...")]
    ignore_columns: Option<String>,
    /// Recode a two-valued numeric output to +1/-1 classes
    #[arg(long, value_name = "BOOL")]
    binary_output: Option<bool>,
}

#[derive(Args)]
struct ModelArgs {
    /// Model kind: linear, urysohn or tree
    #[arg(long, value_name = "KIND")]
    kind: Option<String>,
    /// Addend (branch) count for tree models
    #[arg(long, value_name = "K")]
    addends: Option<usize>,
    /// Nodes per input function: one count, or a per-input list "2,3,6"
    #[arg(long, value_name = "N[,N,...]")]
    nodes: Option<String>,
    /// Nodes of the tree's root function
    #[arg(long, value_name = "N")]
    root_nodes: Option<usize>,
    /// Kaczmarz projection step (0, 1]
    #[arg(long, value_name = "A")]
    alpha: Option<f64>,
    /// Tree noise-reduction fraction (0, 1]
    #[arg(long, value_name = "MU")]
    mu: Option<f64>,
    /// Tree slope-threshold guard (adaptive when absent)
    #[arg(long, value_name = "D")]
    delta: Option<f64>,
    /// Training epochs
    #[arg(long, value_name = "N")]
    epochs: Option<usize>,
    /// Base seed; repeats and folds derive their own seeds from it
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
}

#[derive(Args)]
struct ReportArgs {
    /// Also write the key=value report to a file
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Bound a report value: "metric>=v" or "metric<=v"; exit 2 on failure
    #[arg(long = "assert", value_name = "EXPR")]
    asserts: Vec<String>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Number of records to generate
    #[arg(long, value_name = "N")]
    count: Option<usize>,
    /// Generator seed
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Output CSV path
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Where to write the trained model
    #[arg(long, value_name = "FILE")]
    model_out: Option<PathBuf>,
    /// Where to write the per-epoch training trace
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct CvArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Fold count
    #[arg(long, value_name = "K")]
    k: Option<usize>,
    /// Number of repeated cross-validations (distinct derived seeds)
    #[arg(long, value_name = "N")]
    repeats: Option<usize>,
    /// Cap on parallel fold jobs (default: all cores)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct SelectArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Train/selection/test fractions, e.g. "0.6,0.2,0.2"
    #[arg(long, value_name = "F,F,F")]
    fractions: Option<String>,
    /// Number of candidate models trained with distinct derived seeds
    #[arg(long, value_name = "N")]
    repeats: Option<usize>,
    /// Where to write the winning model
    #[arg(long, value_name = "FILE")]
    model_out: Option<PathBuf>,
    /// Cap on parallel candidate jobs (default: all cores)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Saved model file
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    #[command(flatten)]
    data: DataArgs,
    /// Where to write the per-record predictions (CSV)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Run one named experiment, or all of them
    Run {
        /// Experiment name, or "all"
        name: String,
        /// Cap on parallel fold jobs (default: all cores)
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        /// Exit 2 if any executed experiment fails its bands
        #[arg(long)]
        assert: bool,
    },
    /// Run every experiment and print the comparison table
    Table {
        /// Emit comma-separated values instead of the aligned table
        #[arg(long)]
        csv: bool,
        /// Cap on parallel fold jobs (default: all cores)
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outputs; everything else is
            // a usage error and must exit 1, not clap's default 2, which
            // this tool reserves for failed assertions.
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Train(args) => cmd_train(args),
        Command::Cv(args) => cmd_cv(args),
        Command::Select(args) => cmd_select(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

// ---------------------------------------------------------------------------
// Config files: plain key=value lines, '#' comments. Explicit flags win.
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct FileConfig {
    map: HashMap<String, String>,
    origin: String,
}

impl FileConfig {
    fn load(path: Option<&Path>, command: &str, accepted: &[&str]) -> Result<FileConfig> {
        let Some(path) = path else {
            return Ok(FileConfig { map: HashMap::new(), origin: String::new() });
        };
        let origin = path.display().to_string();
        let text =
            std::fs::read_to_string(path).with_context(|| format!("cannot read config {origin}"))?;
        let mut map = HashMap::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{origin} line {}: expected key=value", number + 1))?;
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            if key == "command" {
                if value != command {
                    bail!("{origin} is a config for `{value}`, not `{command}`");
                }
                continue;
            }
            if !accepted.contains(&key.as_str()) {
                bail!(
                    "{origin} line {}: unknown key {key:?} for `{command}` (accepted: {})",
                    number + 1,
                    accepted.join(", ")
                );
            }
            if map.insert(key.clone(), value).is_some() {
                bail!("{origin} line {}: duplicate key {key:?}", number + 1);
            }
        }
        Ok(FileConfig { map, origin })
    }

    /// The file's value for `key`, parsed, when the flag didn't set one.
    fn fill<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("{} key {key}: invalid value {raw:?}: {e}", self.origin)),
        }
    }
}

const DATA_KEYS: [&str; 6] =
    ["data", "delimiter", "header", "output-column", "ignore-columns", "binary-output"];
const MODEL_KEYS: [&str; 9] =
    ["kind", "addends", "nodes", "root-nodes", "alpha", "mu", "delta", "epochs", "seed"];

fn accepted_keys(data: bool, model: bool, extra: &[&'static str]) -> Vec<&'static str> {
    let mut all = Vec::new();
    if data {
        all.extend(DATA_KEYS);
    }
    if model {
        all.extend(MODEL_KEYS);
    }
    all.extend(extra);
    all
}

impl DataArgs {
    fn load(&self, cfg: &FileConfig) -> Result<Dataset> {
        let data: PathBuf = cfg
            .fill(self.data.clone(), "data")?
            .ok_or_else(|| anyhow!("a dataset is required (--data or config data=)"))?;
        let delimiter = match cfg.fill(self.delimiter.clone(), "delimiter")? {
            None => None,
            Some(s) if s == "tab" || s == "\\t" => Some(b'\t'),
            Some(s) if s.len() == 1 && s.is_ascii() => Some(s.as_bytes()[0]),
            Some(s) => bail!("delimiter must be one ASCII character or \"tab\", got {s:?}"),
        };
        let ignored_columns = match cfg.fill(self.ignore_columns.clone(), "ignore-columns")? {
            None => Vec::new(),
            Some(list) => parse_list(&list).context("--ignore-columns")?,
        };
        let options = ParseOptions {
            delimiter,
            header: cfg.fill(self.header, "header")?,
            output_column: cfg.fill(self.output_column, "output-column")?,
            ignored_columns,
            binary_output: cfg.fill(self.binary_output, "binary-output")?.unwrap_or(false),
        };
        Ok(parse_csv(&data, &options)?)
    }
}

impl ModelArgs {
    fn resolve(&self, cfg: &FileConfig) -> Result<ModelConfig> {
        let kind: ModelKind = cfg
            .fill(self.kind.clone(), "kind")?
            .ok_or_else(|| anyhow!("a model kind is required (--kind or config kind=)"))?
            .parse()?;
        let mut mc = ModelConfig::new(kind);
        if let Some(raw) = cfg.fill(self.nodes.clone(), "nodes")? {
            mc = mc.with_nodes(parse_nodes(&raw)?);
        }
        if let Some(n) = cfg.fill(self.root_nodes, "root-nodes")? {
            mc = mc.with_root_nodes(n);
        }
        if let Some(k) = cfg.fill(self.addends, "addends")? {
            mc = mc.with_addends(k);
        }
        if let Some(a) = cfg.fill(self.alpha, "alpha")? {
            mc = mc.with_alpha(a);
        }
        if let Some(m) = cfg.fill(self.mu, "mu")? {
            mc = mc.with_mu(m);
        }
        if let Some(d) = cfg.fill(self.delta, "delta")? {
            mc = mc.with_delta(d);
        }
        if let Some(e) = cfg.fill(self.epochs, "epochs")? {
            mc = mc.with_epochs(e);
        }
        if let Some(s) = cfg.fill(self.seed, "seed")? {
            mc = mc.with_seed(s);
        }
        Ok(mc)
    }
}

fn parse_list<T: std::str::FromStr>(raw: &str) -> Result<Vec<T>>
where
    T::Err: Display,
{
    raw.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse().map_err(|e| anyhow!("invalid list entry {part:?}: {e}"))
        })
        .collect()
}

fn parse_nodes(raw: &str) -> Result<NodeCounts> {
    let counts: Vec<usize> = parse_list(raw).context("--nodes")?;
    Ok(match counts.as_slice() {
        [one] => NodeCounts::Uniform(*one),
        _ => NodeCounts::PerInput(counts),
    })
}

fn parse_fractions(raw: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<f64> = parse_list(raw).context("--fractions")?;
    match parts.as_slice() {
        [a, b, c] => Ok((*a, *b, *c)),
        _ => bail!("--fractions needs exactly three comma-separated values, got {raw:?}"),
    }
}

// ---------------------------------------------------------------------------
// Reports: ordered key=value lines, printed and optionally written, with
// numeric values available to --assert bounds.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct Report {
    lines: Vec<String>,
    numbers: HashMap<String, f64>,
}

impl Report {
    fn num(&mut self, key: &str, value: f64) {
        self.lines.push(format!("{key}={value}"));
        self.numbers.insert(key.to_string(), value);
    }

    fn text(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key}={value}"));
    }

    fn eval(&mut self, prefix: &str, eval: &EvalReport, classification: bool) {
        let key = |name: &str| format!("{prefix}{name}");
        self.num(&key("records"), eval.count as f64);
        self.num(&key("pearson"), eval.pearson);
        self.num(&key("rmse"), eval.rmse);
        self.num(&key("nrmse"), eval.nrmse);
        if classification {
            self.num(&key("errors"), eval.sign_errors as f64);
            self.num(&key("accuracy"), eval.sign_accuracy());
        }
    }

    fn cv(&mut self, cv: &CvReport, classification: bool) {
        self.num("repeats", cv.repeats.len() as f64);
        for (name, ci) in [("pearson", cv.pearson()), ("rmse", cv.rmse()), ("nrmse", cv.nrmse())] {
            self.num(name, ci.mean);
            self.num(&format!("{name}_ci"), ci.half_width);
        }
        if classification {
            for (name, ci) in [("errors", cv.errors()), ("accuracy", cv.accuracy())] {
                self.num(name, ci.mean);
                self.num(&format!("{name}_ci"), ci.half_width);
            }
        }
    }

    /// Print the report, write it if asked, and apply the assertion
    /// bounds; a violated bound turns into exit code 2.
    fn finish(self, args: &ReportArgs) -> Result<ExitCode> {
        let text = self.lines.join("\n") + "\n";
        print!("{text}");
        if let Some(path) = &args.report {
            std::fs::write(path, &text)
                .with_context(|| format!("cannot write report {}", path.display()))?;
        }
        let mut failures = Vec::new();
        for spec in args.asserts.iter().flat_map(|s| s.split(',')) {
            let spec = spec.trim();
            if spec.is_empty() {
                continue;
            }
            let (metric, at_least, bound) = parse_assertion(spec)?;
            let value = *self
                .numbers
                .get(metric)
                .ok_or_else(|| anyhow!("--assert names unknown metric {metric:?}"))?;
            let holds = if at_least { value >= bound } else { value <= bound };
            if !holds {
                failures.push(format!("assert failed: {spec} (actual {value})"));
            }
        }
        if failures.is_empty() {
            Ok(ExitCode::SUCCESS)
        } else {
            for failure in &failures {
                eprintln!("{failure}");
            }
            Ok(ExitCode::from(2))
        }
    }
}

fn parse_assertion(spec: &str) -> Result<(&str, bool, f64)> {
    let (metric, bound, at_least) = if let Some((m, b)) = spec.split_once(">=") {
        (m, b, true)
    } else if let Some((m, b)) = spec.split_once("<=") {
        (m, b, false)
    } else {
        bail!("--assert expects \"metric>=value\" or \"metric<=value\", got {spec:?}");
    };
    let bound: f64 =
        bound.trim().parse().map_err(|e| anyhow!("--assert bound in {spec:?}: {e}"))?;
    Ok((metric.trim(), at_least, bound))
}

// ---------------------------------------------------------------------------
// Commands.
// ---------------------------------------------------------------------------

fn cmd_synth(args: SynthArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(args.config.config.as_deref(), "synth", &["count", "seed", "out"])?;
    let count: usize = cfg
        .fill(args.count, "count")?
        .ok_or_else(|| anyhow!("a record count is required (--count or config count=)"))?;
    let seed = cfg.fill(args.seed, "seed")?.unwrap_or(0);
    let out: PathBuf = cfg
        .fill(args.out, "out")?
        .ok_or_else(|| anyhow!("an output path is required (--out or config out=)"))?;
    if count == 0 {
        bail!("--count must be at least 1");
    }
    let dataset = synth_generate(count, seed);
    let mut text = String::from("x1,x2,x3,x4,x5,z\n");
    for i in 0..dataset.record_count() {
        for x in dataset.record(i) {
            text.push_str(&format!("{x},"));
        }
        text.push_str(&format!("{}\n", dataset.output(i)));
    }
    std::fs::write(&out, text).with_context(|| format!("cannot write {}", out.display()))?;
    println!("records={count}");
    println!("seed={seed}");
    println!("out={}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_train(args: TrainArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(
        args.config.config.as_deref(),
        "train",
        &accepted_keys(true, true, &["model-out", "trace"]),
    )?;
    let dataset = args.data.load(&cfg)?;
    let mc = args.model.resolve(&cfg)?;
    let model_out: PathBuf = cfg
        .fill(args.model_out, "model-out")?
        .ok_or_else(|| anyhow!("a model path is required (--model-out or config model-out=)"))?;
    let trace_out: Option<PathBuf> = cfg.fill(args.trace, "trace")?;

    let indices = all_indices(&dataset);
    let (model, trace) = train_model(&dataset, &indices, &mc)?;
    store::save(&model_out, &model, &mc)?;
    if let Some(path) = &trace_out {
        let mut text = String::new();
        for (epoch, (residual, skip)) in
            trace.epoch_mean_abs_residual.iter().zip(&trace.epoch_skip_rate).enumerate()
        {
            text.push_str(&format!(
                "epoch={} mean_abs_residual={residual} skip_rate={skip}\n",
                epoch + 1
            ));
        }
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }

    let eval = evaluate(&model, &dataset, &indices)?;
    let mut report = Report::default();
    report.text("kind", mc.kind);
    report.text("model", model_out.display());
    report.num("final_mean_abs_residual", trace.final_mean_abs_residual());
    report.eval("train_", &eval, model.is_classification());
    report.finish(&args.report)
}

fn cmd_cv(args: CvArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(
        args.config.config.as_deref(),
        "cv",
        &accepted_keys(true, true, &["k", "repeats"]),
    )?;
    let dataset = args.data.load(&cfg)?;
    let mc = args.model.resolve(&cfg)?;
    let k = cfg.fill(args.k, "k")?.unwrap_or(10);
    let repeats = cfg.fill(args.repeats, "repeats")?.unwrap_or(1);

    let cv = run_cv(&dataset, &mc, k, repeats, args.jobs)?;
    let mut report = Report::default();
    report.text("kind", mc.kind);
    report.num("k", k as f64);
    report.cv(&cv, dataset.is_classification());
    report.finish(&args.report)
}

fn cmd_select(args: SelectArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(
        args.config.config.as_deref(),
        "select",
        &accepted_keys(true, true, &["fractions", "repeats", "model-out"]),
    )?;
    let dataset = args.data.load(&cfg)?;
    let mc = args.model.resolve(&cfg)?;
    let fractions = match cfg.fill(args.fractions.clone(), "fractions")? {
        Some(raw) => parse_fractions(&raw)?,
        None => (0.6, 0.2, 0.2),
    };
    let repeats = cfg.fill(args.repeats, "repeats")?.unwrap_or(10);
    let model_out: Option<PathBuf> = cfg.fill(args.model_out, "model-out")?;

    let (model, select) = run_select(&dataset, &mc, fractions, repeats, args.jobs)?;
    if let Some(path) = &model_out {
        store::save(path, &model, &mc)?;
    }
    let mut report = Report::default();
    report.text("kind", mc.kind);
    report.num("candidates", select.selection.len() as f64);
    report.num("best", (select.best + 1) as f64);
    for (i, eval) in select.selection.iter().enumerate() {
        report.num(&format!("selection_{}_pearson", i + 1), eval.pearson);
    }
    report.eval("test_", &select.test, model.is_classification());
    if let Some(path) = &model_out {
        report.text("model", path.display());
    }
    report.finish(&args.report)
}

fn cmd_predict(args: PredictArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(
        args.config.config.as_deref(),
        "predict",
        &accepted_keys(true, false, &["model", "out"]),
    )?;
    let model_path: PathBuf = cfg
        .fill(args.model, "model")?
        .ok_or_else(|| anyhow!("a model file is required (--model or config model=)"))?;
    let (model, _) = store::load(&model_path)?;
    let dataset = args.data.load(&cfg)?;

    let indices = all_indices(&dataset);
    let predicted = predictions(&model, &dataset, &indices)?;
    if let Some(out) = &args.out {
        let mut text = String::from("z_hat\n");
        for z in &predicted {
            text.push_str(&format!("{z}\n"));
        }
        std::fs::write(out, text).with_context(|| format!("cannot write {}", out.display()))?;
    }

    let eval = evaluate(&model, &dataset, &indices)?;
    let mut report = Report::default();
    report.text("kind", model.kind());
    report.text("model", model_path.display());
    report.eval("", &eval, model.is_classification());
    report.finish(&args.report)
}

fn cmd_bench(command: BenchCommand) -> Result<ExitCode> {
    match command {
        BenchCommand::Run { name, jobs, assert } => {
            let outcomes = if name == "all" {
                run_all(jobs)?
            } else {
                vec![run_experiment(&name, jobs)?]
            };
            print!("{}", table_text(&outcomes));
            for outcome in &outcomes {
                for note in &outcome.notes {
                    println!("# {}: {note}", outcome.name);
                }
            }
            let failed = outcomes.iter().filter(|o| o.status == ExperimentStatus::Failed).count();
            report_skips(&outcomes);
            if failed > 0 {
                eprintln!("{failed} experiment(s) failed their bands");
                if assert {
                    return Ok(ExitCode::from(2));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        BenchCommand::Table { csv, jobs } => {
            let outcomes = run_all(jobs)?;
            if csv {
                print!("{}", table_csv(&outcomes));
            } else {
                print!("{}", table_text(&outcomes));
            }
            report_skips(&outcomes);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn report_skips(outcomes: &[ExperimentOutcome]) {
    for outcome in outcomes {
        if outcome.status == ExperimentStatus::FetchRequired {
            eprintln!("{}: dataset not fetched — skipped; see README (Benchmark datasets)", outcome.name);
        }
    }
}
