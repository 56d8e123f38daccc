//! Table writers (CSV or JSON) and the metadata sidecar.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentSpec, Format};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl Cell {
    /// Shortest text that parses back to the same value.
    fn render(&self) -> String {
        match self {
            Cell::Num(v) if *v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&v.abs()) => {
                v.to_string()
            }
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    /// File stem, e.g. `fig9-sumrate`.
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// RFC 4180 CSV with a header row and LF line endings.
pub fn to_csv(table: &Table) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.into_inner().map_err(|e| csv::Error::from(e.into_error()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(path, e))
}

/// Writes every table into `spec.output_dir`; returns the paths written.
pub fn write_tables(spec: &ExperimentSpec, tables: &[Table]) -> Result<Vec<PathBuf>, CliError> {
    let dir = &spec.output_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::with_capacity(tables.len());
    for table in tables {
        let (ext, bytes) = match spec.format {
            Format::Csv => (
                "csv",
                to_csv(table).map_err(|e| CliError::io(dir.join(&table.name), e))?,
            ),
            Format::Json => {
                let mut bytes = serde_json::to_vec_pretty(table).expect("tables serialize");
                bytes.push(b'\n');
                ("json", bytes)
            }
        };
        let path = dir.join(format!("{}.{ext}", table.name));
        write_file(&path, &bytes)?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Debug, Serialize)]
pub struct Metadata<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub preset: String,
    pub seed: u64,
    pub config: &'a ExperimentSpec,
    pub rayleigh_b: f64,
    pub outputs: Vec<String>,
    pub started_unix_s: u64,
    pub wall_time_s: f64,
}

pub fn write_metadata(spec: &ExperimentSpec, meta: &Metadata<'_>) -> Result<PathBuf, CliError> {
    let path = spec
        .output_dir
        .join(format!("{}.meta.json", spec.preset.name()));
    let mut bytes = serde_json::to_vec_pretty(meta).expect("metadata serializes");
    bytes.push(b'\n');
    write_file(&path, &bytes)?;
    Ok(path)
}
