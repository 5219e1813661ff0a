//! Command reports and their JSON / CSV renderings.
//!
//! JSON carries the whole report (`schema_version` identifies the layout).
//! CSV carries the first table only, with its column names as header.
//! Cells are strings: rationals as `p/q`, floats as shortest round-trip decimals.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational output without a pass/fail claim.
    Info,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandReport {
    pub schema_version: u32,
    pub tool_version: String,
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub normalization: Vec<String>,
    pub seed: Option<u64>,
    pub verdict: Verdict,
    pub summary: BTreeMap<String, String>,
    pub tables: Vec<Table>,
}

impl CommandReport {
    pub fn new(command: Vec<String>) -> Self {
        CommandReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command,
            normalization: Vec::new(),
            seed: None,
            verdict: Verdict::Info,
            summary: BTreeMap::new(),
            tables: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.summary.insert(key.into(), value.to_string());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let table = self
            .tables
            .first()
            .ok_or_else(|| CliError::Io("report has no table to write as CSV".into()))?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.columns)
            .map_err(|e| CliError::Io(e.to_string()))?;
        for row in &table.rows {
            w.write_record(row)
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
        String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
            .map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Writes the rendered report to `path`, or to stdout when `path` is `None`.
pub fn emit(report: &CommandReport, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let text = report.render(format)?;
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
