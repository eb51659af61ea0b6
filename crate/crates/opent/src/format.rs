//! File formats and output rendering.
//!
//! Every floating-point value is written with 17 significant digits, which
//! round-trips any `f64` exactly.

use std::fs;
use std::path::Path;

use opent_core::choi::KrausMap;
use opent_core::{ComplexMatrix, C64};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{Number, Value};

use crate::error::{CliError, CliResult};

/// `x` with 17 significant digits in scientific notation.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON number carrying the 17-digit text of `x`; `null` when not finite.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    match sig17(x).parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

/// `serialize_with` helper for `f64` fields.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    number(*x).serialize(s)
}

pub fn ser_f64_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    x.map_or(Value::Null, number).serialize(s)
}

pub fn ser_f64_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    Value::Array(xs.iter().map(|&x| number(x)).collect()).serialize(s)
}

/// Matrix file: `{"rows": r, "cols": c, "entries": [[re, im], ...]}` with
/// entries in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    #[serde(serialize_with = "ser_entries")]
    pub entries: Vec<[f64; 2]>,
}

fn ser_entries<S: Serializer>(entries: &[[f64; 2]], s: S) -> Result<S::Ok, S::Error> {
    Value::Array(
        entries
            .iter()
            .map(|[re, im]| Value::Array(vec![number(*re), number(*im)]))
            .collect(),
    )
    .serialize(s)
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> CliResult<ComplexMatrix> {
        let expected = self.rows.checked_mul(self.cols).ok_or_else(|| CliError::parse("matrix size overflows"))?;
        if self.entries.len() != expected {
            return Err(CliError::parse(format!(
                "matrix declares {}x{} = {expected} entries but lists {}",
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        let data = self.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Ok(ComplexMatrix::new(self.rows, self.cols, data)?)
    }
}

/// Kraus-map file: `{"d": d, "trace_preserving": bool, "kraus": [matrix, ...]}`
/// where each Kraus operator acts on `C^d ⊗ C^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausJson {
    pub d: usize,
    pub trace_preserving: bool,
    pub kraus: Vec<MatrixJson>,
}

impl KrausJson {
    pub fn from_map(map: &KrausMap) -> Self {
        Self {
            d: map.dim_a(),
            trace_preserving: map.is_trace_preserving(),
            kraus: map.kraus().iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    pub fn to_map(&self) -> CliResult<KrausMap> {
        let kraus = self.kraus.iter().map(MatrixJson::to_matrix).collect::<CliResult<Vec<_>>>()?;
        Ok(KrausMap::new(kraus, self.d, self.d, self.trace_preserving)?)
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn read_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    serde_json::from_str::<MatrixJson>(&read_text(path)?)?.to_matrix()
}

pub fn read_kraus(path: &Path) -> CliResult<KrausMap> {
    serde_json::from_str::<KrausJson>(&read_text(path)?)?.to_map()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

pub fn render(report: &impl Serialize, format: OutputFormat) -> CliResult<String> {
    match format {
        OutputFormat::Json => render_json(report),
        OutputFormat::Csv => render_csv(report),
    }
}

pub fn render_json(report: &impl Serialize) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Output(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// CSV with a header row. An array of objects gives one row per element;
/// a single object gives one row. Nested fields are flattened to dotted
/// column names.
pub fn render_csv(report: &impl Serialize) -> CliResult<String> {
    let value = serde_json::to_value(report).map_err(|e| CliError::Output(e.to_string()))?;
    let records: Vec<Value> = match value {
        Value::Array(items) => items,
        other => vec![other],
    };
    let rows: Vec<Vec<(String, String)>> = records
        .iter()
        .map(|r| {
            let mut cells = Vec::new();
            flatten("", r, &mut cells);
            cells
        })
        .collect();
    let mut writer = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        writer
            .write_record(first.iter().map(|(k, _)| k.as_str()))
            .map_err(|e| CliError::Output(e.to_string()))?;
    }
    for row in &rows {
        writer
            .write_record(row.iter().map(|(_, v)| v.as_str()))
            .map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
    }
}
