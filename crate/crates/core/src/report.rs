//! Serialization of results: a versioned JSON report schema, a JSON matrix
//! encoding, and an RFC 4180 CSV writer with fixed field order and fixed
//! float formatting, so that identical inputs produce byte-identical files.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{C64, CMat};

/// Bumped whenever the shape of [`Report`] changes.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// JSON encoding of a complex matrix: row-major `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&CMat> for MatrixJson {
    fn from(m: &CMat) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                entries.push([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        MatrixJson { rows: m.nrows(), cols: m.ncols(), entries }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMat> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Dimension(format!(
                "matrix JSON carries {} entries for a {}x{} shape",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(CMat::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.entries[i * self.cols + j];
            C64::new(re, im)
        }))
    }
}

/// One named check inside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportItem {
    pub name: String,
    pub passed: bool,
    pub details: serde_json::Value,
}

/// Top-level result document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub passed: bool,
    pub items: Vec<ReportItem>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            passed: true,
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, details: serde_json::Value) {
        self.passed = self.passed && passed;
        self.items.push(ReportItem { name: name.into(), passed, details });
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Fixed 17-significant-digit float rendering used in every CSV field.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Render rows as RFC 4180 CSV (CRLF line endings, quoting only where
/// needed). Rows are written in the order given; callers are responsible
/// for a deterministic order.
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.iter().map(|h| csv_escape(h)).collect::<Vec<_>>().join(","));
    out.push_str("\r\n");
    for row in rows {
        out.push_str(&row.iter().map(|f| csv_escape(f)).collect::<Vec<_>>().join(","));
        out.push_str("\r\n");
    }
    out
}
