//! Exact text serialisation of trained models.
//!
//! A model file is a line-oriented, versioned text format designed for one
//! purpose: a reloaded model must predict **bit-identically** to the saved
//! one, on every machine. All floating-point numbers are therefore written
//! as C-style hex floats (`0x1.921fb54442d18p+1`), which encode the exact
//! bit pattern of an `f64`, and the writer is canonical — saving a loaded
//! model reproduces the original file byte for byte.
//!
//! Layout, in fixed order (one field per line, fields space-separated):
//!
//! ```text
//! urysohn model format 1
//! kind <linear|urysohn|tree>
//! classification <true|false>
//! seed <u64>
//! alpha <hex>                     training-config echo, exact
//! mu <hex>
//! delta <adaptive|hex>
//! epochs <count>
//! nodes <uniform N | per-input N1,N2,...>
//! root-nodes <count>
//! addends <default | count>
//! inputs <m>                      then, per input j:
//! input <j> continuous <min> <max>
//! input <j> categorical <levels>
//! name <j> <column name>
//! level <j> <code> <level name>   one per level, codes 1..levels
//! functions <m>                   single-operator payload, or:
//! branches <K> <m>                tree payload: K operator blocks
//! branch <k>
//! root <K>                        then K root functions
//! function <i> continuous <min> <max> <node count>
//! function <i> quantized <levels>
//! values <hex> <hex> ...          node values of the preceding function
//! end
//! ```
//!
//! Column and level names are written verbatim except for three escapes
//! (`\\`, `\n`, `\r`), so arbitrary text survives the line orientation.
//! Loading rejects unknown versions, non-finite numbers, structural
//! mismatches and malformed fields, always naming the offending line.
//! Files are immutable after write; concurrent readers are safe.

use std::path::Path;

use crate::data::{ColumnKind, ColumnRole, ColumnSpec};
use crate::pwl::{PiecewiseLinear, UrysohnOperator};
use crate::runner::{Model, ModelConfig, ModelForm, ModelKind, NodeCounts};
use crate::tree::UrysohnTree;
use crate::{Error, Result};

const HEADER: &str = "urysohn model format 1";
const VERSION_PREFIX: &str = "urysohn model format ";

/// C-style hex-float rendering of a finite double: sign, `0x`, a leading
/// digit (`1` for normal, `0` for zero and subnormal values), the fraction
/// with trailing zeros trimmed, and the binary exponent. The rendering is
/// canonical: every bit pattern has exactly one spelling. `None` for NaN
/// and infinities.
pub fn hex_float(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let mantissa = bits & ((1u64 << 52) - 1);
    if biased == 0 && mantissa == 0 {
        return Some(format!("{sign}0x0p+0"));
    }
    let (lead, exponent) = if biased == 0 { (0, -1022) } else { (1, biased - 1023) };
    let mut frac = format!("{mantissa:013x}");
    while frac.ends_with('0') {
        frac.pop();
    }
    Some(if frac.is_empty() {
        format!("{sign}0x{lead}p{exponent:+}")
    } else {
        format!("{sign}0x{lead}.{frac}p{exponent:+}")
    })
}

/// Exact power of two as a double, covering the full finite range down to
/// the smallest subnormal.
fn pow2(e: i32) -> Option<f64> {
    match e {
        -1074..=-1023 => Some(f64::from_bits(1u64 << (e + 1074))),
        -1022..=1023 => Some(f64::from_bits(((e + 1023) as u64) << 52)),
        _ => None,
    }
}

/// Parse a hex float produced by [`hex_float`], recovering the exact bit
/// pattern. The mantissa is reassembled as an integer (at most 53 bits, so
/// exactly representable) and scaled by an exact power of two; the single
/// multiplication rounds to the unique double the string denotes. `None`
/// for anything malformed, out of range, or non-finite.
pub fn parse_hex_float(s: &str) -> Option<f64> {
    let (negative, rest) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let rest = rest.strip_prefix("0x")?;
    let (mantissa, exponent) = rest.split_once('p')?;
    let exponent: i32 = exponent.parse().ok()?;
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.len() != 1 || frac_part.len() > 13 {
        return None;
    }
    let digits = [int_part, frac_part].concat();
    if !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    let m = u64::from_str_radix(&digits, 16).ok()?;
    if m >= 1 << 53 {
        return None;
    }
    let value = m as f64 * pow2(exponent - 4 * frac_part.len() as i32)?;
    if !value.is_finite() {
        return None;
    }
    Some(if negative { -value } else { value })
}

fn store_err(line: usize, message: impl std::fmt::Display) -> Error {
    Error::Store(format!("line {line}: {message}"))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(line: usize, s: &str) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            _ => return Err(store_err(line, format!("bad escape sequence in {s:?}"))),
        }
    }
    Ok(out)
}

fn require_hex(x: f64, what: &str) -> Result<String> {
    hex_float(x)
        .ok_or_else(|| Error::Store(format!("cannot save a non-finite {what} ({x})")))
}

fn push_function(out: &mut String, idx: usize, f: &PiecewiseLinear) -> Result<()> {
    if f.is_quantized() {
        out.push_str(&format!("function {idx} quantized {}\n", f.node_count()));
    } else {
        let (min, max) = f.domain();
        out.push_str(&format!(
            "function {idx} continuous {} {} {}\n",
            require_hex(min, "domain bound")?,
            require_hex(max, "domain bound")?,
            f.node_count()
        ));
    }
    out.push_str("values");
    for &v in f.node_values() {
        out.push(' ');
        out.push_str(&require_hex(v, "node value")?);
    }
    out.push('\n');
    Ok(())
}

/// Render `model` and its training config to the format described in the
/// module docs. Rejects non-finite numbers and a config whose kind
/// contradicts the model's.
pub fn save_string(model: &Model, config: &ModelConfig) -> Result<String> {
    if config.kind != model.kind() {
        return Err(Error::Store(format!(
            "config kind {} contradicts model kind {}",
            config.kind,
            model.kind()
        )));
    }
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("kind {}\n", model.kind()));
    out.push_str(&format!("classification {}\n", model.is_classification()));
    out.push_str(&format!("seed {}\n", config.seed));
    out.push_str(&format!("alpha {}\n", require_hex(config.alpha, "alpha")?));
    out.push_str(&format!("mu {}\n", require_hex(config.mu, "mu")?));
    match config.delta {
        None => out.push_str("delta adaptive\n"),
        Some(delta) => out.push_str(&format!("delta {}\n", require_hex(delta, "delta")?)),
    }
    out.push_str(&format!("epochs {}\n", config.epochs));
    match &config.nodes {
        NodeCounts::Uniform(n) => out.push_str(&format!("nodes uniform {n}\n")),
        NodeCounts::PerInput(list) => {
            let list: Vec<String> = list.iter().map(|n| n.to_string()).collect();
            out.push_str(&format!("nodes per-input {}\n", list.join(",")));
        }
    }
    out.push_str(&format!("root-nodes {}\n", config.root_nodes));
    match config.addends {
        None => out.push_str("addends default\n"),
        Some(k) => out.push_str(&format!("addends {k}\n")),
    }
    out.push_str(&format!("inputs {}\n", model.input_len()));
    for (j, column) in model.columns().iter().enumerate() {
        let j = j + 1;
        match &column.kind {
            ColumnKind::Continuous { min, max } => out.push_str(&format!(
                "input {j} continuous {} {}\n",
                require_hex(*min, "column bound")?,
                require_hex(*max, "column bound")?
            )),
            ColumnKind::Categorical { levels } => {
                out.push_str(&format!("input {j} categorical {}\n", levels.len()));
            }
        }
        out.push_str(&format!("name {j} {}\n", escape(&column.name)));
        if let ColumnKind::Categorical { levels } = &column.kind {
            for (code, level) in levels.iter().enumerate() {
                out.push_str(&format!("level {j} {} {}\n", code + 1, escape(level)));
            }
        }
    }
    match model.form() {
        ModelForm::Single(op) => {
            out.push_str(&format!("functions {}\n", op.input_len()));
            for (i, f) in op.functions().iter().enumerate() {
                push_function(&mut out, i + 1, f)?;
            }
        }
        ModelForm::Tree(tree) => {
            out.push_str(&format!("branches {} {}\n", tree.addends(), tree.input_len()));
            for (k, branch) in tree.branches().iter().enumerate() {
                out.push_str(&format!("branch {}\n", k + 1));
                for (i, f) in branch.functions().iter().enumerate() {
                    push_function(&mut out, i + 1, f)?;
                }
            }
            out.push_str(&format!("root {}\n", tree.addends()));
            for (i, f) in tree.root().functions().iter().enumerate() {
                push_function(&mut out, i + 1, f)?;
            }
        }
    }
    out.push_str("end\n");
    Ok(out)
}

/// Save `model` and its training config to `path`.
pub fn save(path: &Path, model: &Model, config: &ModelConfig) -> Result<()> {
    let text = save_string(model, config)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Line reader tracking one-based line numbers for error messages.
struct Cursor<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { lines: text.lines().collect(), pos: 0 }
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        let line = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| store_err(self.pos + 1, "unexpected end of file"))?;
        self.pos += 1;
        Ok((self.pos, line))
    }

    /// After `end`, only blank lines may remain.
    fn expect_blank_tail(&self) -> Result<()> {
        for (offset, line) in self.lines[self.pos..].iter().enumerate() {
            if !line.trim().is_empty() {
                return Err(store_err(self.pos + offset + 1, "content after the end marker"));
            }
        }
        Ok(())
    }
}

/// Next line, which must start with the token `key`; returns the remainder.
fn kv<'a>(cursor: &mut Cursor<'a>, key: &str) -> Result<(usize, &'a str)> {
    let (no, line) = cursor.next()?;
    match line.split_once(' ') {
        Some((k, rest)) if k == key => Ok((no, rest)),
        _ => Err(store_err(no, format!("expected a `{key}` field, found {line:?}"))),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| store_err(line, format!("invalid {what} {token:?}")))
}

fn parse_hex(line: usize, token: &str) -> Result<f64> {
    parse_hex_float(token)
        .ok_or_else(|| store_err(line, format!("invalid hex float {token:?}")))
}

/// One `function` line plus its `values` line.
fn read_function(cursor: &mut Cursor, expect_idx: usize) -> Result<(usize, PiecewiseLinear)> {
    let (no, rest) = kv(cursor, "function")?;
    let tokens: Vec<&str> = rest.split(' ').collect();
    let idx: usize = parse_num(no, tokens.first().copied().unwrap_or(""), "function index")?;
    if idx != expect_idx {
        return Err(store_err(no, format!("expected function {expect_idx}, found {idx}")));
    }
    match tokens.get(1).copied() {
        Some("continuous") if tokens.len() == 5 => {
            let min = parse_hex(no, tokens[2])?;
            let max = parse_hex(no, tokens[3])?;
            let count: usize = parse_num(no, tokens[4], "node count")?;
            if count < 2 {
                return Err(store_err(no, "a continuous function needs at least 2 nodes"));
            }
            if min >= max {
                return Err(store_err(no, "function domain must satisfy min < max"));
            }
            let values = read_values(cursor, count)?;
            Ok((no, PiecewiseLinear::continuous_with_values(min, max, values)))
        }
        Some("quantized") if tokens.len() == 3 => {
            let levels: usize = parse_num(no, tokens[2], "level count")?;
            if levels == 0 {
                return Err(store_err(no, "a quantized function needs at least 1 level"));
            }
            let values = read_values(cursor, levels)?;
            Ok((no, PiecewiseLinear::quantized_with_values(values)))
        }
        _ => Err(store_err(no, format!("malformed function line {rest:?}"))),
    }
}

fn read_values(cursor: &mut Cursor, count: usize) -> Result<Vec<f64>> {
    let (no, rest) = kv(cursor, "values")?;
    let mut values = Vec::with_capacity(count);
    for token in rest.split(' ') {
        values.push(parse_hex(no, token)?);
    }
    if values.len() != count {
        return Err(store_err(
            no,
            format!("expected {count} node values, found {}", values.len()),
        ));
    }
    Ok(values)
}

/// The function at `line` must agree with the column it feeds on: quantized
/// for a categorical column (with one node per level), continuous otherwise.
fn check_function_column(line: usize, f: &PiecewiseLinear, column: &ColumnSpec) -> Result<()> {
    match &column.kind {
        ColumnKind::Categorical { levels } => {
            if !f.is_quantized() {
                return Err(store_err(
                    line,
                    format!("column {:?} is categorical but its function is continuous", column.name),
                ));
            }
            if f.node_count() != levels.len() {
                return Err(store_err(
                    line,
                    format!(
                        "function has {} nodes for column {:?} with {} levels",
                        f.node_count(),
                        column.name,
                        levels.len()
                    ),
                ));
            }
        }
        ColumnKind::Continuous { .. } => {
            if f.is_quantized() {
                return Err(store_err(
                    line,
                    format!("column {:?} is continuous but its function is quantized", column.name),
                ));
            }
        }
    }
    Ok(())
}

/// Parse a model file's text. See the module docs for the format.
pub fn load_str(text: &str) -> Result<(Model, ModelConfig)> {
    let mut cursor = Cursor::new(text);

    let (no, line) = cursor.next()?;
    if line != HEADER {
        return Err(match line.strip_prefix(VERSION_PREFIX) {
            Some(version) => {
                store_err(no, format!("unsupported model format version {version:?}"))
            }
            None => store_err(no, "not a urysohn model file"),
        });
    }

    let (no, kind) = kv(&mut cursor, "kind")?;
    let kind = match kind {
        "linear" => ModelKind::Linear,
        "urysohn" => ModelKind::Single,
        "tree" => ModelKind::Tree,
        other => return Err(store_err(no, format!("unknown model kind {other:?}"))),
    };
    let (no, classification) = kv(&mut cursor, "classification")?;
    let classification: bool = parse_num(no, classification, "classification flag")?;
    let (no, seed) = kv(&mut cursor, "seed")?;
    let seed: u64 = parse_num(no, seed, "seed")?;
    let (no, alpha) = kv(&mut cursor, "alpha")?;
    let alpha = parse_hex(no, alpha)?;
    let (no, mu) = kv(&mut cursor, "mu")?;
    let mu = parse_hex(no, mu)?;
    let (no, delta) = kv(&mut cursor, "delta")?;
    let delta = match delta {
        "adaptive" => None,
        token => Some(parse_hex(no, token)?),
    };
    let (no, epochs) = kv(&mut cursor, "epochs")?;
    let epochs: usize = parse_num(no, epochs, "epoch count")?;
    let (no, nodes) = kv(&mut cursor, "nodes")?;
    let nodes = match nodes.split_once(' ') {
        Some(("uniform", n)) => NodeCounts::Uniform(parse_num(no, n, "node count")?),
        Some(("per-input", list)) => {
            let mut counts = Vec::new();
            for token in list.split(',') {
                counts.push(parse_num(no, token, "node count")?);
            }
            NodeCounts::PerInput(counts)
        }
        _ => return Err(store_err(no, format!("malformed nodes field {nodes:?}"))),
    };
    let (no, root_nodes) = kv(&mut cursor, "root-nodes")?;
    let root_nodes: usize = parse_num(no, root_nodes, "root node count")?;
    let (no, addends) = kv(&mut cursor, "addends")?;
    let addends = match addends {
        "default" => None,
        token => Some(parse_num(no, token, "addend count")?),
    };

    let (no, input_len) = kv(&mut cursor, "inputs")?;
    let input_len: usize = parse_num(no, input_len, "input count")?;
    if input_len == 0 {
        return Err(store_err(no, "a model needs at least one input"));
    }
    let mut columns = Vec::with_capacity(input_len);
    for j in 1..=input_len {
        let (no, rest) = kv(&mut cursor, "input")?;
        let tokens: Vec<&str> = rest.split(' ').collect();
        let idx: usize = parse_num(no, tokens.first().copied().unwrap_or(""), "input index")?;
        if idx != j {
            return Err(store_err(no, format!("expected input {j}, found {idx}")));
        }
        // `None` level count marks a continuous column.
        let (bounds, level_count) = match (tokens.get(1).copied(), tokens.len()) {
            (Some("continuous"), 4) => {
                ((parse_hex(no, tokens[2])?, parse_hex(no, tokens[3])?), None)
            }
            (Some("categorical"), 3) => {
                let count: usize = parse_num(no, tokens[2], "level count")?;
                if count == 0 {
                    return Err(store_err(no, "a categorical input needs at least 1 level"));
                }
                ((0.0, 0.0), Some(count))
            }
            _ => return Err(store_err(no, format!("malformed input line {rest:?}"))),
        };
        let (name_no, rest) = kv(&mut cursor, "name")?;
        let (idx_token, raw_name) = rest
            .split_once(' ')
            .ok_or_else(|| store_err(name_no, "malformed name line"))?;
        let idx: usize = parse_num(name_no, idx_token, "input index")?;
        if idx != j {
            return Err(store_err(name_no, format!("expected name {j}, found {idx}")));
        }
        let name = unescape(name_no, raw_name)?;
        let kind = match level_count {
            None => ColumnKind::Continuous { min: bounds.0, max: bounds.1 },
            Some(count) => {
                let mut levels: Vec<String> = Vec::with_capacity(count);
                for code in 1..=count {
                    let (no, rest) = kv(&mut cursor, "level")?;
                    let mut parts = rest.splitn(3, ' ');
                    let idx: usize = parse_num(no, parts.next().unwrap_or(""), "input index")?;
                    let got_code: usize =
                        parse_num(no, parts.next().unwrap_or(""), "level code")?;
                    let text =
                        parts.next().ok_or_else(|| store_err(no, "malformed level line"))?;
                    if idx != j || got_code != code {
                        return Err(store_err(
                            no,
                            format!("expected level {code} of input {j}, found {rest:?}"),
                        ));
                    }
                    let level = unescape(no, text)?;
                    if let Some(last) = levels.last() {
                        if *last >= level {
                            return Err(store_err(
                                no,
                                "levels must be strictly sorted for code lookup",
                            ));
                        }
                    }
                    levels.push(level);
                }
                ColumnKind::Categorical { levels }
            }
        };
        columns.push(ColumnSpec { name, role: ColumnRole::Input, kind });
    }

    let form = match kind {
        ModelKind::Linear | ModelKind::Single => {
            let (no, count) = kv(&mut cursor, "functions")?;
            let count: usize = parse_num(no, count, "function count")?;
            if count != input_len {
                return Err(store_err(
                    no,
                    format!("{count} functions declared for {input_len} inputs"),
                ));
            }
            let mut functions = Vec::with_capacity(count);
            for i in 1..=count {
                let (line, f) = read_function(&mut cursor, i)?;
                check_function_column(line, &f, &columns[i - 1])?;
                functions.push(f);
            }
            ModelForm::Single(UrysohnOperator::new(functions))
        }
        ModelKind::Tree => {
            let (no, rest) = kv(&mut cursor, "branches")?;
            let tokens: Vec<&str> = rest.split(' ').collect();
            if tokens.len() != 2 {
                return Err(store_err(no, format!("malformed branches line {rest:?}")));
            }
            let k: usize = parse_num(no, tokens[0], "addend count")?;
            let m: usize = parse_num(no, tokens[1], "input count")?;
            if k == 0 {
                return Err(store_err(no, "a tree needs at least one branch"));
            }
            if m != input_len {
                return Err(store_err(
                    no,
                    format!("branches declare {m} inputs, the model has {input_len}"),
                ));
            }
            let mut branches = Vec::with_capacity(k);
            for b in 1..=k {
                let (no, idx) = kv(&mut cursor, "branch")?;
                let idx: usize = parse_num(no, idx, "branch index")?;
                if idx != b {
                    return Err(store_err(no, format!("expected branch {b}, found {idx}")));
                }
                let mut functions = Vec::with_capacity(m);
                for i in 1..=m {
                    let (line, f) = read_function(&mut cursor, i)?;
                    check_function_column(line, &f, &columns[i - 1])?;
                    functions.push(f);
                }
                branches.push(UrysohnOperator::new(functions));
            }
            let (no, root_count) = kv(&mut cursor, "root")?;
            let root_count: usize = parse_num(no, root_count, "root function count")?;
            if root_count != k {
                return Err(store_err(
                    no,
                    format!("{root_count} root functions declared for {k} branches"),
                ));
            }
            let mut root_functions = Vec::with_capacity(k);
            for i in 1..=k {
                let (line, f) = read_function(&mut cursor, i)?;
                if f.is_quantized() {
                    return Err(store_err(line, "root functions must be continuous"));
                }
                root_functions.push(f);
            }
            ModelForm::Tree(UrysohnTree::new(branches, UrysohnOperator::new(root_functions)))
        }
    };

    let (no, line) = cursor.next()?;
    if line != "end" {
        return Err(store_err(no, format!("expected the end marker, found {line:?}")));
    }
    cursor.expect_blank_tail()?;

    let model = Model::from_parts(kind, columns, classification, form)?;
    let config = ModelConfig {
        kind,
        nodes,
        root_nodes,
        addends,
        alpha,
        mu,
        delta,
        epochs,
        seed,
    };
    Ok((model, config))
}

/// Load a model and its training-config echo from `path`.
pub fn load(path: &Path) -> Result<(Model, ModelConfig)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Store(format!("cannot read {}: {e}", path.display())))?;
    load_str(&text)
}
