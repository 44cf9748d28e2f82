//! Tabular report model shared by the JSON, CSV and text writers.

use std::io::Write;

use polycm::EvalResult;
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Text(String),
    Int(i64),
    Float(f64),
    Bool(bool),
    /// Serialized as `{"value", "abs_error"}` in JSON and as two columns in
    /// CSV.
    Measured(EvalResult),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<EvalResult> for Cell {
    fn from(v: EvalResult) -> Self {
        Cell::Measured(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Empty => s.serialize_none(),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Float(f) => s.serialize_f64(*f),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Measured(r) => r.serialize(s),
        }
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Text(t) => t.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format_float(*f),
            Cell::Bool(b) => b.to_string(),
            Cell::Measured(r) => format_float(r.value),
        }
    }

    fn error_text(&self) -> String {
        match self {
            Cell::Measured(r) => format_float(r.abs_error),
            _ => String::new(),
        }
    }
}

fn format_float(v: f64) -> String {
    // shortest round-trip representation
    format!("{v:?}")
}

/// One row: named cells in a fixed column order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Entry {
    cells: Vec<(&'static str, Cell)>,
}

impl Entry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &'static str, cell: impl Into<Cell>) -> Self {
        self.cells.push((name, cell.into()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Cell> {
        self.cells.iter().find(|(n, _)| *n == name).map(|(_, c)| c)
    }

    fn columns(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.cells.iter().map(|(n, _)| *n)
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.cells.len()))?;
        for (k, v) in &self.cells {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: String,
    pub subject: String,
    pub detail: String,
}

impl Finding {
    pub fn new(kind: &str, subject: impl Into<String>, detail: impl Into<String>) -> Self {
        Finding {
            kind: kind.to_owned(),
            subject: subject.into(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub entries: Vec<Entry>,
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// RFC 4180 CSV of the entries. Measured cells expand to `name` and
    /// `name_error` columns.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        let Some(first) = self.entries.first() else {
            return Ok(String::new());
        };
        let mut header = Vec::new();
        for (name, cell) in &first.cells {
            header.push(name.to_string());
            if matches!(cell, Cell::Measured(_)) || self.is_measured_column(name) {
                header.push(format!("{name}_error"));
            }
        }
        w.write_record(&header)?;
        for e in &self.entries {
            let mut rec = Vec::with_capacity(header.len());
            for name in first.columns() {
                let cell = e.get(name).unwrap_or(&Cell::Empty);
                rec.push(cell.text());
                if self.is_measured_column(name) {
                    rec.push(cell.error_text());
                }
            }
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    fn is_measured_column(&self, name: &str) -> bool {
        self.entries
            .iter()
            .any(|e| matches!(e.get(name), Some(Cell::Measured(_))))
    }

    /// Aligned plain-text table followed by the findings.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(first) = self.entries.first() {
            let names: Vec<&str> = first.columns().collect();
            let rows: Vec<Vec<String>> = self
                .entries
                .iter()
                .map(|e| {
                    names
                        .iter()
                        .map(|n| match e.get(n) {
                            Some(Cell::Measured(r)) => {
                                format!("{:.12e} ± {:.1e}", r.value, r.abs_error)
                            }
                            Some(c) => c.text(),
                            None => String::new(),
                        })
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = names
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    rows.iter()
                        .map(|r| r[i].chars().count())
                        .chain([n.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<String>| -> String {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_owned()
            };
            out.push_str(&line(names.iter().map(|s| s.to_string()).collect()));
            out.push('\n');
            for r in rows {
                out.push_str(&line(r));
                out.push('\n');
            }
        }
        if !self.findings.is_empty() {
            out.push_str("\nfindings:\n");
            for f in &self.findings {
                out.push_str(&format!("  [{}] {}: {}\n", f.kind, f.subject, f.detail));
            }
        }
        out
    }

    pub fn render(&self, format: crate::config::Format) -> Result<String, CliError> {
        use crate::config::Format;
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }

    pub fn write_to(&self, format: crate::config::Format, out: &mut dyn Write) -> Result<(), CliError> {
        out.write_all(self.render(format)?.as_bytes())?;
        Ok(())
    }
}
