//! Versioned report files and their merge.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// One check family run.  `generated_at` is the only field that may differ
/// between two runs with the same configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub family: String,
    pub generated_at: Option<String>,
    pub parameters: Value,
    /// `None` for experiments without a pass/fail bound.
    pub tolerance: Option<f64>,
    pub worst_residual: Option<f64>,
    pub passed: Option<bool>,
    pub notes: Vec<String>,
    pub rows: Vec<Value>,
}

impl Report {
    pub fn new(family: &str, parameters: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            family: family.to_string(),
            generated_at: None,
            parameters,
            tolerance: None,
            worst_residual: None,
            passed: None,
            notes: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn push_row<T: Serialize>(&mut self, row: &T) -> Result<()> {
        self.rows.push(serde_json::to_value(row)?);
        Ok(())
    }

    /// Sets the verdict from a list of residuals checked against `tol`.
    pub fn judge(&mut self, tol: f64, residuals: impl IntoIterator<Item = f64>) {
        let worst = residuals.into_iter().fold(0.0f64, |m, r| if r.is_nan() { f64::NAN } else { m.max(r) });
        self.tolerance = Some(tol);
        self.worst_residual = Some(worst);
        self.passed = Some(worst <= tol);
    }

    pub fn stamp(&mut self) {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.generated_at = Some(format!("unix:{secs}"));
    }

    /// Digest of everything except the timestamp.
    pub fn digest(&self) -> String {
        let mut r = self.clone();
        r.generated_at = None;
        let bytes = serde_json::to_vec(&r).unwrap_or_default();
        hex::encode(Sha256::digest(bytes))
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }

    /// Rows as CSV; columns are the union of row keys in sorted order and
    /// nested values are written as JSON.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rows_csv(&self.rows, w)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

pub fn write_rows_csv<W: Write>(rows: &[Value], w: W) -> Result<()> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    cols.sort();
    let mut out = csv::Writer::from_writer(w);
    out.write_record(&cols).map_err(csv_err)?;
    for r in rows {
        let rec: Vec<String> = cols
            .iter()
            .map(|k| match r.get(k) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            })
            .collect();
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_report(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    match v.get("schema_version").and_then(Value::as_u64) {
        Some(s) if s == SCHEMA_VERSION as u64 => {}
        Some(s) => {
            return Err(Error::Schema(format!(
                "{} has schema_version {s}, expected {SCHEMA_VERSION}",
                path.display()
            )))
        }
        None => {
            return Err(Error::Parse {
                path: path.display().to_string(),
                reason: "missing schema_version".into(),
            })
        }
    }
    serde_json::from_value(v).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Worst case per check family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub family: String,
    /// Distinct reports (by content digest) merged into this row.
    pub reports: usize,
    pub worst_residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: Option<bool>,
}

pub fn merge(reports: &[Report]) -> Vec<SummaryRow> {
    let mut seen = std::collections::BTreeSet::new();
    let mut fams: BTreeMap<String, SummaryRow> = BTreeMap::new();
    for r in reports {
        if !seen.insert(r.digest()) {
            continue;
        }
        let row = fams.entry(r.family.clone()).or_insert_with(|| SummaryRow {
            family: r.family.clone(),
            reports: 0,
            worst_residual: None,
            tolerance: None,
            passed: None,
        });
        row.reports += 1;
        row.worst_residual = match (row.worst_residual, r.worst_residual) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        row.tolerance = match (row.tolerance, r.tolerance) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        row.passed = match (row.passed, r.passed) {
            (Some(a), Some(b)) => Some(a && b),
            (a, b) => a.or(b),
        };
    }
    fams.into_values().collect()
}
