//! CSV and JSON rendering.
//!
//! CSV: a `#` comment block (tool version, assumptions, resolved config,
//! run-level results) followed by a header row and data rows. Floats are
//! written as `{:.16e}` so output is byte-stable across runs.

use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::config::RunConfig;
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const OMEGA_NOTE: &str = "transition frequency omega = 1 unless overridden with --omega";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // Fold −0 into 0 so sign-of-zero noise does not reach the output.
            Cell::Float(x) => format!("{:.16e}", if *x == 0.0 { 0.0 } else { *x }),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // serde_json maps non-finite floats to null.
            Cell::Float(x) => json!(x),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What a command produced. `certified` drives the exit status.
#[derive(Debug, Clone)]
pub struct Report {
    pub meta: Vec<(&'static str, Value)>,
    pub body: Body,
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub enum Body {
    Table(Table),
    Document(Value),
}

fn config_value(cfg: &RunConfig) -> Result<Value, CliError> {
    serde_json::to_value(cfg).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn render(cfg: &RunConfig, report: &Report) -> Result<String, CliError> {
    match (&report.body, cfg.format) {
        (Body::Table(t), Format::Csv) => render_csv(cfg, &report.meta, t),
        (Body::Table(t), Format::Json) => {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> =
                        t.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                    Value::Object(m)
                })
                .collect();
            let doc = json!({
                "version": VERSION,
                "assumptions": [OMEGA_NOTE],
                "config": config_value(cfg)?,
                "meta": meta_object(&report.meta),
                "certified": report.certified,
                "columns": t.columns,
                "rows": rows,
            });
            pretty(&doc)
        }
        (Body::Document(d), _) => {
            let mut doc = json!({
                "version": VERSION,
                "assumptions": [OMEGA_NOTE],
                "config": config_value(cfg)?,
                "certified": report.certified,
            });
            if let (Value::Object(dst), Value::Object(src)) = (&mut doc, d) {
                dst.extend(src.clone());
            }
            pretty(&doc)
        }
    }
}

fn meta_object(meta: &[(&'static str, Value)]) -> Value {
    Value::Object(meta.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
}

fn pretty(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn render_csv(
    cfg: &RunConfig,
    meta: &[(&'static str, Value)],
    t: &Table,
) -> Result<String, CliError> {
    let mut out = String::new();
    out.push_str(&format!("# sgad {VERSION}\n"));
    out.push_str(&format!("# assumption: {OMEGA_NOTE}\n"));
    out.push_str(&format!("# config = {}\n", config_value(cfg)?));
    for (k, v) in meta {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    let mut w =
        csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(&t.columns).map_err(io)?;
    for row in &t.rows {
        w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    out.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))?);
    Ok(out)
}
