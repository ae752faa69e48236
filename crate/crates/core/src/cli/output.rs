//! Artifact emission.
//!
//! CSV files start with `#`-prefixed header lines (tool version, SHA-256 of
//! the resolved config, the config itself as one JSON line), followed by a
//! column row of the form `name [unit]` and the data. Numbers are written
//! with `{:.15e}`; non-finite values as `NaN`, `inf`, `-inf`. JSON files hold
//! the same header as an object and the rows as arrays, with non-finite
//! numbers written as `null`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.15e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(v) if !v.is_finite() => "null".into(),
            Cell::Num(v) => num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => Value::String(s.clone()).to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

/// One output file's worth of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File-name suffix; empty for the scenario's main table.
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// `columns` as `(name, unit)` pairs.
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|(n, u)| Column { name: n.to_string(), unit: u.to_string() }).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

/// Everything a scenario produces.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Artifact {
    pub tables: Vec<Table>,
    /// Scalar results; written to `<scenario>-summary.json` when non-empty.
    pub summary: serde_json::Map<String, Value>,
}

impl Artifact {
    pub fn note(&mut self, key: &str, value: impl Serialize) {
        // Non-finite floats serialize as null.
        self.summary.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }
}

/// Header shared by every file of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    pub config: Value,
}

impl Header {
    pub fn new(config: &impl Serialize) -> Self {
        let config = serde_json::to_value(config).unwrap_or(Value::Null);
        let digest = Sha256::digest(config.to_string().as_bytes());
        Self { tool: "gravcat".into(), version: VERSION.into(), config_sha256: hex::encode(digest), config }
    }
}

pub fn render_csv(header: &Header, table: &Table) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {} {}", header.tool, header.version);
    let _ = writeln!(s, "# config-sha256: {}", header.config_sha256);
    let _ = writeln!(s, "# config: {}", header.config);
    let cols: Vec<String> = table.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)).collect();
    s.push_str(&cols.join(","));
    s.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn render_json(header: &Header, table: &Table) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{{\"header\":{},\"columns\":{},\"rows\":[",
        serde_json::to_string(header).unwrap_or_default(),
        serde_json::to_string(&table.columns).unwrap_or_default()
    );
    for (i, row) in table.rows.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push('\n');
        let cells: Vec<String> = row.iter().map(Cell::json).collect();
        let _ = write!(s, "[{}]", cells.join(","));
    }
    s.push_str("\n]}\n");
    s
}

pub fn render_summary(header: &Header, summary: &serde_json::Map<String, Value>) -> String {
    let doc = serde_json::json!({ "header": header, "summary": summary });
    let mut s = serde_json::to_string_pretty(&doc).unwrap_or_default();
    s.push('\n');
    s
}

/// Writes all files of `artifact` into `dir` and returns their paths in
/// write order.
pub fn write_artifact(
    dir: &Path,
    stem: &str,
    format: Format,
    header: &Header,
    artifact: &Artifact,
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for table in &artifact.tables {
        let name = if table.name.is_empty() { stem.to_string() } else { format!("{stem}-{}", table.name) };
        let path = dir.join(format!("{name}.{}", format.extension()));
        let text = match format {
            Format::Csv => render_csv(header, table),
            Format::Json => render_json(header, table),
        };
        fs::write(&path, text)?;
        written.push(path);
    }
    if !artifact.summary.is_empty() {
        let path = dir.join(format!("{stem}-summary.json"));
        fs::write(&path, render_summary(header, &artifact.summary))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Header, Table) {
        let mut t = Table::new("", &[("t", "s"), ("p", "1"), ("label", "-")]);
        t.push(vec![0.0.into(), 1.0.into(), "a".into()]);
        t.push(vec![0.5.into(), f64::NAN.into(), "b,c".into()]);
        (Header::new(&serde_json::json!({"k": 1})), t)
    }

    #[test]
    fn csv_layout() {
        let (h, t) = sample();
        let text = render_csv(&h, &t);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# gravcat "));
        assert_eq!(lines[1].len(), "# config-sha256: ".len() + 64);
        assert_eq!(lines[2], "# config: {\"k\":1}");
        assert_eq!(lines[3], "t [s],p [1],label [-]");
        assert_eq!(lines[4], "0.000000000000000e0,1.000000000000000e0,a");
        assert_eq!(lines[5], "5.000000000000000e-1,NaN,\"b,c\"");
    }

    #[test]
    fn json_is_valid_and_nan_is_null() {
        let (h, t) = sample();
        let v: Value = serde_json::from_str(&render_json(&h, &t)).unwrap();
        assert_eq!(v["rows"][1][1], Value::Null);
        assert_eq!(v["rows"][0][1].as_f64(), Some(1.0));
        assert_eq!(v["columns"][0]["unit"], "s");
        assert_eq!(v["header"]["config"]["k"], 1);
    }

    #[test]
    fn hash_depends_only_on_config() {
        let a = Header::new(&serde_json::json!({"x": 1.5}));
        let b = Header::new(&serde_json::json!({"x": 1.5}));
        let c = Header::new(&serde_json::json!({"x": 1.25}));
        assert_eq!(a.config_sha256, b.config_sha256);
        assert_ne!(a.config_sha256, c.config_sha256);
    }
}
