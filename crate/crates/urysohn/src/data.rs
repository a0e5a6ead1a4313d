//! Dataset ingestion, typing, encoding, windowing and splitting.
//!
//! CSV columns are auto-typed: a column whose every field parses as a
//! finite number is continuous, anything else is categorical. Categorical
//! levels are encoded as the integers `1..=L` in lexicographic order of the
//! level strings, so the encoding is stable across files and runs. Binary
//! outputs are coded `+1`/`-1` for sign-threshold classification.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pwl::InputSpec;
use crate::train::TrainData;
use crate::{Error, Result};

/// What a dataset column is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    Input,
    Output,
    Ignored,
}

/// Observed type of a dataset column.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnKind {
    /// Every field parsed as a finite number; `min`/`max` are the observed
    /// bounds over the whole file.
    Continuous { min: f64, max: f64 },
    /// At least one field was not numeric; `levels` holds the distinct
    /// strings sorted lexicographically, encoded as `1..=levels.len()`.
    Categorical { levels: Vec<String> },
}

impl ColumnKind {
    /// One-based integer code of a categorical level, if present.
    pub fn encode(&self, level: &str) -> Option<usize> {
        match self {
            ColumnKind::Categorical { levels } => {
                levels.binary_search_by(|l| l.as_str().cmp(level)).ok().map(|i| i + 1)
            }
            ColumnKind::Continuous { .. } => None,
        }
    }

    /// Level string behind a one-based categorical code, if present.
    pub fn level_name(&self, code: usize) -> Option<&str> {
        match self {
            ColumnKind::Categorical { levels } => {
                (1..=levels.len()).contains(&code).then(|| levels[code - 1].as_str())
            }
            ColumnKind::Continuous { .. } => None,
        }
    }

    /// Human-readable type name for error messages.
    pub fn describe(&self) -> &'static str {
        match self {
            ColumnKind::Continuous { .. } => "continuous",
            ColumnKind::Categorical { .. } => "categorical",
        }
    }
}

/// Name, role and observed type of one dataset column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpec {
    pub name: String,
    pub role: ColumnRole,
    pub kind: ColumnKind,
}

/// Encoded records plus the column metadata they were produced from.
///
/// Inputs are stored row-major, one `f64` per input column per record:
/// continuous values as parsed, categorical values as their one-based
/// level codes. The output is either a plain continuous value or a
/// `+1`/`-1` class code (see [`Dataset::is_classification`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<ColumnSpec>,
    inputs: Vec<f64>,
    outputs: Vec<f64>,
    classification: bool,
    provenance: String,
}

impl Dataset {
    /// Assemble a dataset from already-encoded parts. `columns` must list
    /// exactly one output column, and `inputs` must hold one value per
    /// input column per record.
    ///
    /// # Panics
    ///
    /// Panics if the shapes are inconsistent.
    pub fn from_parts(
        columns: Vec<ColumnSpec>,
        inputs: Vec<f64>,
        outputs: Vec<f64>,
        classification: bool,
        provenance: String,
    ) -> Self {
        let m = columns.iter().filter(|c| c.role == ColumnRole::Input).count();
        assert!(m > 0, "a dataset needs at least one input column");
        assert_eq!(
            columns.iter().filter(|c| c.role == ColumnRole::Output).count(),
            1,
            "a dataset needs exactly one output column",
        );
        assert_eq!(inputs.len(), outputs.len() * m, "encoded block shape mismatch");
        Dataset { columns, inputs, outputs, classification, provenance }
    }

    pub fn record_count(&self) -> usize {
        self.outputs.len()
    }

    /// Number of input columns (the width of one encoded record).
    pub fn input_len(&self) -> usize {
        self.inputs.len() / self.outputs.len().max(1)
    }

    pub fn record(&self, i: usize) -> &[f64] {
        let m = self.input_len();
        &self.inputs[i * m..(i + 1) * m]
    }

    pub fn output(&self, i: usize) -> f64 {
        self.outputs[i]
    }

    pub fn outputs(&self) -> &[f64] {
        &self.outputs
    }

    pub fn columns(&self) -> &[ColumnSpec] {
        &self.columns
    }

    /// Column specs of the input slots, in encoded order.
    pub fn input_columns(&self) -> impl Iterator<Item = &ColumnSpec> {
        self.columns.iter().filter(|c| c.role == ColumnRole::Input)
    }

    /// Whether the output is a `+1`/`-1` class code rather than a
    /// continuous value.
    pub fn is_classification(&self) -> bool {
        self.classification
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Spread `max - min` of the outputs at `indices` (all records when
    /// `indices` is empty is *not* implied — pass the full range).
    pub fn output_range(&self, indices: &[usize]) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in indices {
            lo = lo.min(self.outputs[i]);
            hi = hi.max(self.outputs[i]);
        }
        hi - lo
    }

    /// Gather the records at `indices` into a training block. Continuous
    /// input domains are harvested from this subset only, so values seen
    /// later outside them are clamped at evaluation; categorical inputs
    /// keep one level slot per level of the whole dataset, so levels absent
    /// from the subset still have (zero-valued) nodes.
    pub fn train_data(&self, indices: &[usize]) -> Result<TrainData> {
        if indices.is_empty() {
            return Err(Error::Data("cannot build training data from zero records".into()));
        }
        let m = self.input_len();
        let mut specs = Vec::with_capacity(m);
        for (slot, col) in self.input_columns().enumerate() {
            match &col.kind {
                ColumnKind::Continuous { .. } => {
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    for &i in indices {
                        let v = self.record(i)[slot];
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                    if !(hi > lo) {
                        return Err(Error::Data(format!(
                            "input column '{}' is constant over the training subset",
                            col.name
                        )));
                    }
                    specs.push(InputSpec::Continuous { min: lo, max: hi });
                }
                ColumnKind::Categorical { levels } => {
                    specs.push(InputSpec::Quantized { levels: levels.len() });
                }
            }
        }
        let mut inputs = Vec::with_capacity(indices.len() * m);
        let mut outputs = Vec::with_capacity(indices.len());
        for &i in indices {
            inputs.extend_from_slice(self.record(i));
            outputs.push(self.outputs[i]);
        }
        Ok(TrainData::new(inputs, outputs, specs))
    }

    /// Training block over every record.
    pub fn train_data_all(&self) -> Result<TrainData> {
        let indices: Vec<usize> = (0..self.record_count()).collect();
        self.train_data(&indices)
    }
}

/// How to read a CSV file; the defaults auto-detect everything and take
/// the last column as the output.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Field delimiter; `None` auto-detects among `,`, `;` and tab by
    /// counting them on the first non-empty line.
    pub delimiter: Option<u8>,
    /// Whether the first row is a header; `None` detects one by looking
    /// for a column that is numeric everywhere except in the first row.
    pub header: Option<bool>,
    /// One-based output column; `None` means the last column.
    pub output_column: Option<usize>,
    /// One-based columns to drop from the records (still typed, never
    /// encoded).
    pub ignored_columns: Vec<usize>,
    /// Force a two-valued numeric output to `+1`/`-1` class codes (the
    /// larger value becomes `+1`). Two-level categorical outputs are
    /// always coded this way, lexicographically first level `+1`.
    pub binary_output: bool,
}

fn parse_num(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn detect_delimiter(text: &str) -> u8 {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let count = |b: u8| first.bytes().filter(|&c| c == b).count();
    let (commas, semis, tabs) = (count(b','), count(b';'), count(b'\t'));
    if tabs > commas && tabs > semis {
        b'\t'
    } else if semis > commas {
        b';'
    } else {
        b','
    }
}

fn detect_header(rows: &[Vec<String>]) -> bool {
    if rows.len() < 2 {
        return false;
    }
    (0..rows[0].len()).any(|c| {
        parse_num(&rows[0][c]).is_none() && rows[1..].iter().all(|r| parse_num(&r[c]).is_some())
    })
}

/// Read a delimited text file into an encoded [`Dataset`].
///
/// Columns are typed from their contents (numeric everywhere → continuous,
/// otherwise categorical with lexicographically ordered one-based level
/// codes). Ragged rows, empty files, empty fields and non-finite numbers
/// are rejected with their row number; so are constant continuous columns
/// and outputs that cannot be encoded.
pub fn parse_csv(path: &Path, options: &ParseOptions) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
    let delimiter = options.delimiter.unwrap_or_else(|| detect_delimiter(&text));

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(false)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        rows.push(record.iter().map(str::to_owned).collect());
    }
    if rows.is_empty() {
        return Err(Error::Data(format!("{}: file holds no records", path.display())));
    }

    let header = options.header.unwrap_or_else(|| detect_header(&rows));
    let names: Vec<String> = if header {
        rows[0].iter().map(|s| s.trim().to_owned()).collect()
    } else {
        (1..=rows[0].len()).map(|i| format!("col{i}")).collect()
    };
    let body_start = usize::from(header);
    let body = &rows[body_start..];
    if body.is_empty() {
        return Err(Error::Data(format!("{}: only a header row, no records", path.display())));
    }
    let width = names.len();
    let row_number = |body_index: usize| body_index + body_start + 1;

    for (i, row) in body.iter().enumerate() {
        for (c, field) in row.iter().enumerate() {
            if field.trim().is_empty() {
                return Err(Error::Data(format!(
                    "{}: row {} has an empty field in column {} ('{}')",
                    path.display(),
                    row_number(i),
                    c + 1,
                    names[c]
                )));
            }
        }
    }

    let output_col = match options.output_column {
        Some(c) if (1..=width).contains(&c) => c - 1,
        Some(c) => {
            return Err(Error::Config(format!(
                "output column {c} out of range for {width} columns"
            )))
        }
        None => width - 1,
    };
    let mut ignored = vec![false; width];
    for &c in &options.ignored_columns {
        if !(1..=width).contains(&c) {
            return Err(Error::Config(format!(
                "ignored column {c} out of range for {width} columns"
            )));
        }
        if c - 1 == output_col {
            return Err(Error::Config(format!("output column {c} cannot be ignored")));
        }
        ignored[c - 1] = true;
    }

    // Type every column from its full contents.
    let mut kinds = Vec::with_capacity(width);
    for c in 0..width {
        let numeric = body.iter().all(|r| parse_num(&r[c]).is_some());
        if numeric {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for row in body {
                let v = parse_num(&row[c]).expect("checked numeric");
                lo = lo.min(v);
                hi = hi.max(v);
            }
            kinds.push(ColumnKind::Continuous { min: lo, max: hi });
        } else {
            let mut levels: Vec<String> = body.iter().map(|r| r[c].trim().to_owned()).collect();
            levels.sort_unstable();
            levels.dedup();
            kinds.push(ColumnKind::Categorical { levels });
        }
    }

    for c in 0..width {
        if c == output_col || ignored[c] {
            continue;
        }
        if let ColumnKind::Continuous { min, max } = kinds[c] {
            if !(max > min) {
                return Err(Error::Data(format!(
                    "input column {} ('{}') is constant ({min}); remove or ignore it",
                    c + 1,
                    names[c]
                )));
            }
        }
    }

    // Work out the output coding.
    enum OutputCoding {
        Plain,
        NumericBinary { negative: f64 },
        CategoricalBinary,
    }
    let coding = match &kinds[output_col] {
        ColumnKind::Continuous { .. } if !options.binary_output => OutputCoding::Plain,
        ColumnKind::Continuous { .. } => {
            let mut distinct: Vec<f64> =
                body.iter().map(|r| parse_num(&r[output_col]).expect("checked numeric")).collect();
            distinct.sort_unstable_by(f64::total_cmp);
            distinct.dedup();
            if distinct.len() != 2 {
                return Err(Error::Data(format!(
                    "binary output requested but column '{}' has {} distinct values",
                    names[output_col],
                    distinct.len()
                )));
            }
            OutputCoding::NumericBinary { negative: distinct[0] }
        }
        ColumnKind::Categorical { levels } => {
            if levels.len() != 2 {
                return Err(Error::Data(format!(
                    "output column '{}' is categorical with {} levels; only two-level \
                     categorical outputs (coded +1/-1) are supported",
                    names[output_col],
                    levels.len()
                )));
            }
            OutputCoding::CategoricalBinary
        }
    };
    let classification = !matches!(coding, OutputCoding::Plain);

    // Encode the records.
    let mut inputs = Vec::new();
    let mut outputs = Vec::with_capacity(body.len());
    for row in body {
        for c in 0..width {
            if c == output_col || ignored[c] {
                continue;
            }
            let v = match &kinds[c] {
                ColumnKind::Continuous { .. } => parse_num(&row[c]).expect("checked numeric"),
                ColumnKind::Categorical { .. } => {
                    kinds[c].encode(row[c].trim()).expect("level collected above") as f64
                }
            };
            inputs.push(v);
        }
        let z = match &coding {
            OutputCoding::Plain => parse_num(&row[output_col]).expect("checked numeric"),
            OutputCoding::NumericBinary { negative } => {
                let v = parse_num(&row[output_col]).expect("checked numeric");
                if v == *negative {
                    -1.0
                } else {
                    1.0
                }
            }
            OutputCoding::CategoricalBinary => {
                // Lexicographically first level encodes as +1.
                if kinds[output_col].encode(row[output_col].trim()) == Some(1) {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        outputs.push(z);
    }

    let columns = names
        .into_iter()
        .zip(kinds)
        .enumerate()
        .map(|(c, (name, kind))| {
            let role = if c == output_col {
                ColumnRole::Output
            } else if ignored[c] {
                ColumnRole::Ignored
            } else {
                ColumnRole::Input
            };
            ColumnSpec { name, role, kind }
        })
        .collect();
    let provenance = format!(
        "{} (delimiter '{}', header {}, output column {})",
        path.display(),
        delimiter as char,
        header,
        output_col + 1
    );
    Ok(Dataset::from_parts(columns, inputs, outputs, classification, provenance))
}

/// Read a single-column numeric series, one value per line; empty lines are
/// skipped and anything else must parse as a finite number.
pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut series = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match parse_num(line) {
            Some(v) => series.push(v),
            None => {
                return Err(Error::Data(format!(
                    "{}: line {} is not a finite number: '{line}'",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(series)
}

/// Read a two-column numeric file as an (input series, output series)
/// pair, with the same delimiter auto-detection as [`parse_csv`]. A
/// non-numeric first line is skipped as a header; every other line must
/// hold exactly two finite numbers.
pub fn read_two_series(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
    let delimiter = detect_delimiter(&text) as char;
    let mut input = Vec::new();
    let mut output = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(delimiter);
        let (x, z) = match (fields.next(), fields.next(), fields.next()) {
            (Some(x), Some(z), None) => (x.trim(), z.trim()),
            _ => {
                return Err(Error::Data(format!(
                    "{}: line {} does not have exactly two columns",
                    path.display(),
                    i + 1
                )))
            }
        };
        match (parse_num(x), parse_num(z)) {
            (Some(x), Some(z)) => {
                input.push(x);
                output.push(z);
            }
            _ if i == 0 => continue,
            _ => {
                return Err(Error::Data(format!(
                    "{}: line {} is not numeric: '{line}'",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    if input.is_empty() {
        return Err(Error::Data(format!("{}: no numeric records", path.display())));
    }
    Ok((input, output))
}

/// Rearrange an input/output signal pair of a dynamic system into records
/// of `m` lagged inputs and one output: record `i` holds the inputs
/// `(x[i+m-1], ..., x[i])` — newest first — and the output `z[i+m-1]`,
/// giving `N - m + 1` records.
pub fn window_siso(input: &[f64], output: &[f64], m: usize) -> Result<Dataset> {
    if m == 0 {
        return Err(Error::Config("window length must be at least 1".into()));
    }
    if input.len() != output.len() {
        return Err(Error::Data(format!(
            "series lengths differ: {} inputs vs {} outputs",
            input.len(),
            output.len()
        )));
    }
    if input.len() < m {
        return Err(Error::Data(format!(
            "series of length {} is shorter than the window m = {m}",
            input.len()
        )));
    }
    let records = input.len() - m + 1;
    let mut inputs = Vec::with_capacity(records * m);
    let mut outputs = Vec::with_capacity(records);
    for i in 0..records {
        for lag in 0..m {
            inputs.push(input[i + m - 1 - lag]);
        }
        outputs.push(output[i + m - 1]);
    }

    let mut columns: Vec<ColumnSpec> = (0..m)
        .map(|lag| {
            let slice: Vec<f64> = (0..records).map(|i| inputs[i * m + lag]).collect();
            let lo = slice.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            ColumnSpec {
                name: if lag == 0 { "x(t)".into() } else { format!("x(t-{lag})") },
                role: ColumnRole::Input,
                kind: ColumnKind::Continuous { min: lo, max: hi },
            }
        })
        .collect();
    let zlo = outputs.iter().cloned().fold(f64::INFINITY, f64::min);
    let zhi = outputs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    columns.push(ColumnSpec {
        name: "z(t)".into(),
        role: ColumnRole::Output,
        kind: ColumnKind::Continuous { min: zlo, max: zhi },
    });
    let provenance = format!("windowed series (N = {}, m = {m})", input.len());
    Ok(Dataset::from_parts(columns, inputs, outputs, false, provenance))
}

/// A seeded k-fold cross-validation plan: indices are shuffled once, then
/// cut into `k` near-equal contiguous validation chunks; every index
/// validates exactly once and trains in the other `k - 1` folds.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldPlan {
    permutation: Vec<usize>,
    folds: Vec<(Vec<usize>, Vec<usize>)>,
}

impl FoldPlan {
    /// Plan `k` folds over `record_count` records using the given seed.
    pub fn new(record_count: usize, k: usize, seed: u64) -> Result<FoldPlan> {
        if k < 2 {
            return Err(Error::Config(format!("cross-validation needs k >= 2, got {k}")));
        }
        if record_count < k {
            return Err(Error::Config(format!(
                "cannot cut {record_count} records into {k} folds"
            )));
        }
        let mut permutation: Vec<usize> = (0..record_count).collect();
        permutation.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

        let base = record_count / k;
        let extra = record_count % k;
        let mut folds = Vec::with_capacity(k);
        let mut start = 0;
        for f in 0..k {
            let len = base + usize::from(f < extra);
            let validation: Vec<usize> = permutation[start..start + len].to_vec();
            let train: Vec<usize> = permutation[..start]
                .iter()
                .chain(&permutation[start + len..])
                .copied()
                .collect();
            folds.push((train, validation));
            start += len;
        }
        Ok(FoldPlan { permutation, folds })
    }

    pub fn fold_count(&self) -> usize {
        self.folds.len()
    }

    /// `(train, validation)` index sets of fold `f`.
    pub fn fold(&self, f: usize) -> (&[usize], &[usize]) {
        let (train, validation) = &self.folds[f];
        (train, validation)
    }

    pub fn folds(&self) -> impl Iterator<Item = (&[usize], &[usize])> {
        self.folds.iter().map(|(t, v)| (t.as_slice(), v.as_slice()))
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }
}

/// Seeded k-fold plan over a dataset's records.
pub fn split_kfold(dataset: &Dataset, k: usize, seed: u64) -> Result<FoldPlan> {
    FoldPlan::new(dataset.record_count(), k, seed)
}

/// Shuffle the records once and cut them into train / selection / test
/// subsets. The first two sizes are the floors of `n * fraction`; the test
/// subset takes the remainder, so the three sets partition the records
/// exactly.
pub fn split_fractions(
    dataset: &Dataset,
    fractions: (f64, f64, f64),
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    split_fraction_counts(dataset.record_count(), fractions, seed)
}

fn split_fraction_counts(
    n: usize,
    (f_train, f_select, f_test): (f64, f64, f64),
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let sum = f_train + f_select + f_test;
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("split fractions must sum to 1, got {sum}")));
    }
    if f_train <= 0.0 || f_select <= 0.0 || f_test <= 0.0 {
        return Err(Error::Config("all three split fractions must be positive".into()));
    }
    let n_train = (n as f64 * f_train).floor() as usize;
    let n_select = (n as f64 * f_select).floor() as usize;
    let n_test = n - n_train - n_select;
    if n_train == 0 || n_select == 0 || n_test == 0 {
        return Err(Error::Config(format!(
            "split of {n} records leaves an empty subset ({n_train}/{n_select}/{n_test})"
        )));
    }
    let mut permutation: Vec<usize> = (0..n).collect();
    permutation.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let select_end = n_train + n_select;
    Ok((
        permutation[..n_train].to_vec(),
        permutation[n_train..select_end].to_vec(),
        permutation[select_end..].to_vec(),
    ))
}

/// Input sampling ranges of the synthetic five-input benchmark function.
pub const SYNTH_RANGES: [(f64, f64); 5] =
    [(0.0, 0.99), (0.0, 1.55), (1.0, 1.49), (0.4, 1.39), (0.0, 0.49)];

/// The synthetic benchmark function
/// `z = |sin(x2)^x1 - exp(-x3)| / x4 + x5 * cos(x5)`,
/// a deliberately awkward mix of powers, exponentials and trigonometry
/// with no physical meaning. Over [`SYNTH_RANGES`] its value stays within
/// `[0, 2.37]`. `0^0` follows the IEEE `powf` convention and evaluates
/// to 1, the continuous limit in the exponent.
pub fn synth_eval(x: &[f64; 5]) -> f64 {
    (x[1].sin().powf(x[0]) - (-x[2]).exp()).abs() / x[3] + x[4] * x[4].cos()
}

/// Sample `count` records of the synthetic benchmark function with inputs
/// uniform over [`SYNTH_RANGES`]; the same seed reproduces the same
/// dataset bit for bit.
pub fn synth_generate(count: usize, seed: u64) -> Dataset {
    assert!(count >= 1, "cannot generate an empty dataset");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::with_capacity(count * 5);
    let mut outputs = Vec::with_capacity(count);
    let mut x = [0.0f64; 5];
    for _ in 0..count {
        for (j, &(lo, hi)) in SYNTH_RANGES.iter().enumerate() {
            x[j] = rng.gen_range(lo..hi);
        }
        inputs.extend_from_slice(&x);
        outputs.push(synth_eval(&x));
    }

    let mut columns: Vec<ColumnSpec> = (0..5)
        .map(|j| {
            let lo = (0..count).map(|i| inputs[i * 5 + j]).fold(f64::INFINITY, f64::min);
            let hi = (0..count).map(|i| inputs[i * 5 + j]).fold(f64::NEG_INFINITY, f64::max);
            ColumnSpec {
                name: format!("x{}", j + 1),
                role: ColumnRole::Input,
                kind: ColumnKind::Continuous { min: lo, max: hi },
            }
        })
        .collect();
    let zlo = outputs.iter().cloned().fold(f64::INFINITY, f64::min);
    let zhi = outputs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    columns.push(ColumnSpec {
        name: "z".into(),
        role: ColumnRole::Output,
        kind: ColumnKind::Continuous { min: zlo, max: zhi },
    });
    Dataset::from_parts(
        columns,
        inputs,
        outputs,
        false,
        format!("synthetic(count = {count}, seed = {seed})"),
    )
}
