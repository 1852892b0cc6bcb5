//! A command result carries a JSON document and a flat table; the requested
//! format picks which one is printed.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub struct Report {
    pub json: Value,
    /// Scalar facts shown above the table in text mode.
    pub summary: Vec<(String, String)>,
    pub table: Table,
    /// Nonzero when the command found an invariant violation.
    pub violations: usize,
}

impl Report {
    pub fn new(json: Value, table: Table) -> Self {
        Report { json, summary: Vec::new(), table, violations: 0 }
    }

    pub fn fact(mut self, key: &str, value: impl ToString) -> Self {
        self.summary.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.table.headers)?;
                for row in &self.table.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            Format::Text => {
                for (k, v) in &self.summary {
                    writeln!(out, "{k}: {v}")?;
                }
                if self.table.rows.is_empty() {
                    return Ok(());
                }
                if !self.summary.is_empty() {
                    writeln!(out)?;
                }
                let mut widths: Vec<usize> = self.table.headers.iter().map(|h| h.chars().count()).collect();
                for row in &self.table.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
                };
                writeln!(out, "{}", line(&self.table.headers))?;
                for row in &self.table.rows {
                    writeln!(out, "{}", line(row))?;
                }
                Ok(())
            }
        }
    }
}
