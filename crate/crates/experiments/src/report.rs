//! CSV tables and JSON summaries.
//!
//! Every experiment produces `<name>.csv` (header row, RFC 4180 quoting,
//! floats with 17 significant digits) and `<name>.summary.json`. Summary
//! verdicts are computed from the same rows that go into the CSV.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use mhk_core::dataset::format_f64;
use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("MHK_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_f64(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Float(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            Cell::Bool(v) => Some(v),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Verdict {
    pub criterion: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(criterion: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            criterion: criterion.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub verdicts: Vec<Verdict>,
    /// Experiment-specific summary values (medians, auxiliary estimates).
    pub extra: Value,
    pub config: Value,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_seconds: f64,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Values of a numeric column, in row order.
    pub fn floats(&self, name: &str) -> Vec<f64> {
        let i = self
            .column(name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows
            .iter()
            .map(|r| r[i].as_f64().expect("numeric column"))
            .collect()
    }

    pub fn bools(&self, name: &str) -> Vec<bool> {
        let i = self
            .column(name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows
            .iter()
            .map(|r| r[i].as_bool().expect("boolean column"))
            .collect()
    }

    pub fn csv_string(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn summary_json(&self) -> Value {
        #[derive(Serialize)]
        struct Summary<'a> {
            experiment: &'a str,
            version: &'a str,
            seed: u64,
            threads: usize,
            wall_time_seconds: f64,
            passed: bool,
            rows: usize,
            verdicts: &'a [Verdict],
            summary: &'a Value,
            config: &'a Value,
        }
        serde_json::to_value(Summary {
            experiment: &self.name,
            version: VERSION,
            seed: self.seed,
            threads: self.threads,
            wall_time_seconds: self.wall_time_seconds,
            passed: self.passed(),
            rows: self.rows.len(),
            verdicts: &self.verdicts,
            summary: &self.extra,
            config: &self.config,
        })
        .expect("summary serializes")
    }

    /// Writes `<dir>/<name>.csv` and `<dir>/<name>.summary.json`.
    pub fn write(&self, dir: &Path) -> anyhow::Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let csv_path = dir.join(format!("{}.csv", self.name));
        let json_path = dir.join(format!("{}.summary.json", self.name));
        fs::write(&csv_path, self.csv_string()?)
            .with_context(|| format!("writing {}", csv_path.display()))?;
        let json = serde_json::to_string_pretty(&self.summary_json())?;
        fs::write(&json_path, json + "\n")
            .with_context(|| format!("writing {}", json_path.display()))?;
        Ok((csv_path, json_path))
    }
}
