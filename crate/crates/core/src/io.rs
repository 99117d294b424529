//! File formats: decision-matrix CSV in and out, ranking and pairwise-matrix
//! CSV readers, JSON run configuration, and deterministic report emission.
//!
//! Reports round every number to 6 significant digits. Decision matrices are
//! written with shortest round-trip formatting instead, so that re-reading an
//! emitted matrix gives back the same values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::domain::{validate_matrix, DecisionMatrix, Ranking, RawTable};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::smaa::PairwiseWinningMatrix;
use crate::stats::FiveNumberSummary;

/// Environment variable naming the directory that holds input data files.
pub const DATA_DIR_ENV: &str = "RR_DATA_DIR";

/// Largest |c_ik + c_ki - 1| accepted when reading a pairwise matrix back
/// from a rounded report.
pub const PAIRWISE_READ_TOL: f64 = 1e-5;

const CORNER: &str = "alternative";

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    parse_err(line, e.to_string())
}

fn decode_utf8(bytes: Vec<u8>) -> Result<String> {
    String::from_utf8(bytes).map_err(|e| {
        let upto = &e.as_bytes()[..e.utf8_error().valid_up_to()];
        let line = 1 + upto.iter().filter(|&&b| b == b'\n').count() as u64;
        parse_err(line, "input is not valid UTF-8")
    })
}

/// Reads a file as UTF-8 text.
pub fn read_text(path: &Path) -> Result<String> {
    decode_utf8(std::fs::read(path)?)
}

/// Records of a CSV document with their 1-based line numbers. Blank lines
/// are skipped, fields are trimmed, and a leading BOM is ignored.
fn records(text: &str) -> Result<Vec<(u64, Vec<String>)>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        out.push((line, rec.iter().map(str::to_owned).collect()));
    }
    Ok(out)
}

fn parse_number(field: &str, line: u64) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field.parse::<f64>().map(Some).map_err(|_| parse_err(line, format!("`{field}` is not a number")))
}

/// Parses a decision-matrix CSV without validating it.
///
/// Layout: a header row whose first cell is ignored and whose remaining
/// cells name the criteria, then one row per alternative, starting with its
/// identifier. Empty cells are kept as missing values.
pub fn parse_decision_csv(text: &str) -> Result<RawTable> {
    let mut recs = records(text)?.into_iter();
    let Some((_, header)) = recs.next() else {
        return Ok(RawTable::default());
    };
    let mut raw = RawTable { criteria: header.into_iter().skip(1).collect(), ..RawTable::default() };
    for (line, fields) in recs {
        let mut fields = fields.into_iter();
        raw.alternatives.push(fields.next().unwrap_or_default());
        raw.cells.push(fields.map(|f| parse_number(&f, line)).collect::<Result<_>>()?);
    }
    Ok(raw)
}

/// Parses and validates a decision-matrix CSV.
pub fn read_decision_csv(text: &str) -> Result<DecisionMatrix> {
    validate_matrix(parse_decision_csv(text)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestOptions {
    /// Rescale every column to [0, 1] by min-max normalization.
    pub normalize: bool,
}

/// Loads a decision matrix from a CSV file.
pub fn ingest(path: &Path, options: IngestOptions) -> Result<DecisionMatrix> {
    let dm = read_decision_csv(&read_text(path)?)?;
    if options.normalize {
        dm.min_max_normalized()
    } else {
        Ok(dm)
    }
}

/// Writes a decision matrix in the input CSV layout, with values that parse
/// back to exactly the same `f64`.
pub fn write_decision_csv(dm: &DecisionMatrix) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once(CORNER).chain(dm.criteria().iter().map(String::as_str));
    w.write_record(header).expect("write to memory");
    for (i, row) in dm.rows().enumerate() {
        let fields = std::iter::once(dm.alternatives()[i].clone()).chain(row.iter().map(|v| format!("{v:?}")));
        w.write_record(fields).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
}

/// `x` with 6 significant digits, in the style of C's `%.6g` (trailing zeros
/// removed, scientific notation outside 1e-4 <= |x| < 1e6).
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let fixed = format!("{:.*}", (5 - exp) as usize, x);
        trim_zeros(&fixed).to_owned()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 6 significant digits.
pub fn round_sig6(x: f64) -> f64 {
    format_sig6(x).parse().unwrap_or(x)
}

fn json_number(x: f64) -> Value {
    Number::from_f64(round_sig6(x)).map_or(Value::Null, Value::Number)
}

/// Ranking read from a `position,alternative` CSV, as identifiers best first.
pub fn parse_ranking_csv(text: &str) -> Result<Vec<String>> {
    let mut recs = records(text)?.into_iter();
    let (line, header) = recs.next().ok_or_else(|| parse_err(1, "empty ranking file"))?;
    if header.len() < 2 || header[0] != "position" || header[1] != CORNER {
        return Err(parse_err(line, "expected header `position,alternative`"));
    }
    let mut entries = Vec::new();
    for (line, fields) in recs {
        if fields.len() < 2 {
            return Err(parse_err(line, "expected position and alternative"));
        }
        let position: usize =
            fields[0].parse().map_err(|_| parse_err(line, format!("`{}` is not a position", fields[0])))?;
        entries.push((position, line, fields[1].clone()));
    }
    entries.sort_by_key(|e| e.0);
    for (k, (position, line, _)) in entries.iter().enumerate() {
        if *position != k + 1 {
            return Err(parse_err(*line, "positions must be 1..m without gaps or repeats"));
        }
    }
    let ids: Vec<String> = entries.into_iter().map(|e| e.2).collect();
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = ids.iter().find(|id| !seen.insert(id.as_str())) {
        return Err(Error::DuplicateIdentifier(dup.clone()));
    }
    Ok(ids)
}

/// Maps identifiers (best first) onto a ranking over `alternatives`. Both
/// must name the same set.
pub fn ranking_from_labels(order: &[String], alternatives: &[String]) -> Result<Ranking> {
    if order.len() != alternatives.len() {
        return Err(Error::DimensionMismatch { expected: alternatives.len(), found: order.len() });
    }
    let index: BTreeMap<&str, usize> = alternatives.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let order = order
        .iter()
        .map(|id| {
            index.get(id.as_str()).copied().ok_or_else(|| Error::InvalidConfig(format!("unknown alternative `{id}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ranking::from_order(order)
}

/// Labelled numeric table, as written by [`emit`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelledTable {
    /// Header of the label column, e.g. `alternative` or `criterion`.
    pub corner: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// Parses a labelled numeric table (header of column labels after a corner
/// cell, then one labelled row each).
pub fn parse_labelled_table(text: &str) -> Result<LabelledTable> {
    let mut recs = records(text)?.into_iter();
    let (_, header) = recs.next().ok_or_else(|| parse_err(1, "empty table"))?;
    let mut header = header.into_iter();
    let corner = header.next().unwrap_or_default();
    let mut table = LabelledTable { corner, row_labels: Vec::new(), col_labels: header.collect(), values: Vec::new() };
    for (line, fields) in recs {
        if fields.len() != table.col_labels.len() + 1 {
            return Err(parse_err(line, format!("expected {} fields", table.col_labels.len() + 1)));
        }
        let mut fields = fields.into_iter();
        table.row_labels.push(fields.next().unwrap_or_default());
        let row = fields
            .map(|f| match parse_number(&f, line)? {
                Some(v) if v.is_finite() => Ok(v),
                _ => Err(parse_err(line, "missing or non-finite value")),
            })
            .collect::<Result<Vec<_>>>()?;
        table.values.push(row);
    }
    Ok(table)
}

/// Reads a pairwise winning matrix written by [`emit`].
///
/// Values rounded on output are accepted when `c_ik + c_ki` is within
/// [`PAIRWISE_READ_TOL`] of 1 and are then rescaled to sum to 1 exactly.
pub fn parse_pairwise_csv(text: &str) -> Result<(Vec<String>, PairwiseWinningMatrix)> {
    let table = parse_labelled_table(text)?;
    let m = table.row_labels.len();
    if table.col_labels != table.row_labels {
        return Err(Error::InvalidMatrix("row and column labels differ".into()));
    }
    if m < 2 {
        return Err(Error::TooFewRowsOrCols { rows: m, cols: table.col_labels.len() });
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = table.row_labels.iter().find(|id| !seen.insert(id.as_str())) {
        return Err(Error::DuplicateIdentifier(dup.clone()));
    }
    let mut c = SquareMatrix::zeros(m);
    for i in 0..m {
        if table.values[i][i].abs() > PAIRWISE_READ_TOL {
            return Err(Error::InvalidMatrix(format!("c[{i}][{i}] must be 0")));
        }
        for k in (i + 1)..m {
            let (a, b) = (table.values[i][k], table.values[k][i]);
            if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                return Err(Error::InvalidMatrix(format!("entry ({i}, {k}) outside [0, 1]")));
            }
            if (a + b - 1.0).abs() > PAIRWISE_READ_TOL {
                return Err(Error::InvalidMatrix(format!("c[{i}][{k}] + c[{k}][{i}] = {} != 1", a + b)));
            }
            let a = a / (a + b);
            c[(i, k)] = a;
            c[(k, i)] = 1.0 - a;
        }
    }
    Ok((table.row_labels, PairwiseWinningMatrix::new(c)?))
}

/// A criterion given by name or by 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CriterionRef {
    Position(usize),
    Name(String),
}

/// Resolves a preference order against the criteria of a matrix, giving
/// 0-based column indices.
pub fn resolve_preference_order(order: &[CriterionRef], criteria: &[String]) -> Result<Vec<usize>> {
    let out = order
        .iter()
        .map(|r| match r {
            CriterionRef::Position(p) if (1..=criteria.len()).contains(p) => Ok(p - 1),
            CriterionRef::Position(p) => Err(Error::InvalidConfig(format!("criterion position {p} out of range"))),
            CriterionRef::Name(name) => criteria
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown criterion `{name}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    if !crate::domain::is_permutation(&out, criteria.len()) {
        return Err(Error::InvalidConfig(format!(
            "preference order must list each of the {} criteria exactly once",
            criteria.len()
        )));
    }
    Ok(out)
}

/// Run configuration file. Every field is optional; command-line flags take
/// precedence over values given here.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Decision-matrix CSV. Relative paths are resolved against the config
    /// file's directory.
    pub data: Option<PathBuf>,
    pub normalize: Option<bool>,
    /// Deterministic weights, in criterion order.
    pub weights: Option<Vec<f64>>,
    /// Criteria from most to least important.
    pub preference_order: Option<Vec<CriterionRef>>,
    /// `uniform` or `ordinal`.
    pub weight_mode: Option<String>,
    /// `ws`, `ci-u1` or `ci-u2`.
    pub aggregator: Option<String>,
    /// `u1` or `u2`.
    pub method: Option<String>,
    pub methodology: Option<u8>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub u1_tol: Option<f64>,
    /// Include raw per-sample tau values in reports.
    pub raw_tau: Option<bool>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_err(e.line() as u64, e.to_string()))
    }

    /// Reads a config file and makes its `data` path absolute.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_json(&read_text(path)?)?;
        if let (Some(data), Some(dir)) = (&cfg.data, path.parent()) {
            if data.is_relative() {
                cfg.data = Some(dir.join(data));
            }
        }
        Ok(cfg)
    }
}

/// Resolves an input path: an existing explicit path is used as is, a
/// relative one is also looked up under `data_dir`; without an explicit path
/// `default_name` is looked up under `data_dir`.
pub fn locate_input(explicit: Option<&Path>, data_dir: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    match (explicit, data_dir) {
        (Some(p), Some(dir)) if !p.exists() && p.is_relative() && dir.join(p).exists() => Some(dir.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(default_name)),
        (None, None) => None,
    }
}

/// One named report item.
#[derive(Clone, Debug, PartialEq)]
pub enum Artifact {
    Table(LabelledTable),
    /// Identifiers best first, with optional scores.
    Ranking {
        order: Vec<String>,
        scores: Option<Vec<f64>>,
    },
    /// Named numbers, e.g. a ratio or a tau value.
    Scalars(BTreeMap<String, f64>),
    /// Named strings, e.g. flags and descriptions.
    Notes(BTreeMap<String, String>),
    /// Summary of `count` tau values, optionally with the values themselves.
    TauDistribution {
        count: usize,
        summary: FiveNumberSummary,
        values: Option<Vec<f64>>,
    },
}

impl Artifact {
    pub fn square(corner: &str, labels: &[String], m: &SquareMatrix) -> Self {
        Artifact::Table(LabelledTable {
            corner: corner.into(),
            row_labels: labels.to_vec(),
            col_labels: labels.to_vec(),
            values: m.to_rows(),
        })
    }

    pub fn ranking(alternatives: &[String], ranking: &Ranking, scores: Option<&[f64]>) -> Self {
        Artifact::Ranking {
            order: ranking.order().iter().map(|&i| alternatives[i].clone()).collect(),
            scores: scores.map(|s| ranking.order().iter().map(|&i| s[i]).collect()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Artifact::Table(t) => {
                let mut rows = Map::new();
                for (label, row) in t.row_labels.iter().zip(&t.values) {
                    let cells = t.col_labels.iter().zip(row).map(|(c, v)| (c.clone(), json_number(*v))).collect();
                    rows.insert(label.clone(), Value::Object(cells));
                }
                let mut obj = Map::new();
                obj.insert("columns".into(), t.col_labels.iter().cloned().map(Value::String).collect());
                obj.insert("rows".into(), t.row_labels.iter().cloned().map(Value::String).collect());
                obj.insert("values".into(), Value::Object(rows));
                Value::Object(obj)
            }
            Artifact::Ranking { order, scores } => order
                .iter()
                .enumerate()
                .map(|(k, id)| {
                    let mut obj = Map::new();
                    obj.insert("position".into(), Value::from(k + 1));
                    obj.insert(CORNER.into(), Value::String(id.clone()));
                    if let Some(s) = scores {
                        obj.insert("score".into(), json_number(s[k]));
                    }
                    Value::Object(obj)
                })
                .collect(),
            Artifact::Scalars(map) => Value::Object(map.iter().map(|(k, v)| (k.clone(), json_number(*v))).collect()),
            Artifact::Notes(map) => {
                Value::Object(map.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect())
            }
            Artifact::TauDistribution { count, summary, values } => {
                let mut obj = Map::new();
                obj.insert("count".into(), Value::from(*count));
                for (k, v) in summary_fields(summary) {
                    obj.insert(k.into(), json_number(v));
                }
                if let Some(vals) = values {
                    obj.insert("values".into(), vals.iter().map(|v| json_number(*v)).collect());
                }
                Value::Object(obj)
            }
        }
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut put = |rec: Vec<String>| w.write_record(rec).expect("write to memory");
        match self {
            Artifact::Table(t) => {
                put(std::iter::once(t.corner.clone()).chain(t.col_labels.iter().cloned()).collect());
                for (label, row) in t.row_labels.iter().zip(&t.values) {
                    put(std::iter::once(label.clone()).chain(row.iter().map(|v| format_sig6(*v))).collect());
                }
            }
            Artifact::Ranking { order, scores } => {
                let mut header = vec!["position".to_owned(), CORNER.to_owned()];
                if scores.is_some() {
                    header.push("score".into());
                }
                put(header);
                for (k, id) in order.iter().enumerate() {
                    let mut rec = vec![(k + 1).to_string(), id.clone()];
                    if let Some(s) = scores {
                        rec.push(format_sig6(s[k]));
                    }
                    put(rec);
                }
            }
            Artifact::Scalars(map) => {
                put(vec!["name".into(), "value".into()]);
                for (k, v) in map {
                    put(vec![k.clone(), format_sig6(*v)]);
                }
            }
            Artifact::Notes(map) => {
                put(vec!["name".into(), "value".into()]);
                for (k, v) in map {
                    put(vec![k.clone(), v.clone()]);
                }
            }
            Artifact::TauDistribution { count, summary, .. } => {
                put(vec!["statistic".into(), "value".into()]);
                put(vec!["count".into(), count.to_string()]);
                for (k, v) in summary_fields(summary) {
                    put(vec![k.into(), format_sig6(v)]);
                }
            }
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
    }
}

fn summary_fields(s: &FiveNumberSummary) -> [(&'static str, f64); 5] {
    [("min", s.min), ("q1", s.q1), ("median", s.median), ("q3", s.q3), ("max", s.max)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Named report items. Names are kept sorted, so output order never depends
/// on insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportBundle {
    artifacts: BTreeMap<String, Artifact>,
}

impl ReportBundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, artifact: Artifact) {
        self.artifacts.insert(name.into(), artifact);
    }

    pub fn get(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.artifacts.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.artifacts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.artifacts.is_empty()
    }

    /// The whole bundle as one document. CSV output separates items with a
    /// `# name` line.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let obj: Map<String, Value> = self.artifacts.iter().map(|(k, a)| (k.clone(), a.to_json())).collect();
                let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                for (k, (name, a)) in self.artifacts.iter().enumerate() {
                    if k > 0 {
                        s.push('\n');
                    }
                    let _ = writeln!(s, "# {name}");
                    s.push_str(&a.to_csv());
                }
                s
            }
        }
    }

    /// Writes one file per item into `dir` (created if needed) and returns
    /// the paths in name order.
    pub fn emit(&self, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::with_capacity(self.artifacts.len());
        for (name, a) in &self.artifacts {
            let (ext, body) = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&a.to_json()).expect("json values serialize");
                    s.push('\n');
                    ("json", s)
                }
                Format::Csv => ("csv", a.to_csv()),
            };
            let path = dir.join(format!("{name}.{ext}"));
            std::fs::write(&path, body)?;
            written.push(path);
        }
        Ok(written)
    }
}
