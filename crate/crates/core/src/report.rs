//! Convergence tables, run manifests and their CSV form.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use sha2::{Digest, Sha256};

use crate::rational::{self, Rational};

/// Digits after the point in the advisory decimal column.
pub const DECIMAL_DIGITS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub index: Vec<i64>,
    pub value: Rational,
    pub target: Option<Rational>,
}

impl Row {
    pub fn residual(&self) -> Option<Rational> {
        self.target.as_ref().map(|t| (&self.value - t).abs())
    }
}

/// Rows of `(index, exact estimate)` with an optional declared target and tolerance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceTable {
    pub name: String,
    pub index_names: Vec<String>,
    pub rows: Vec<Row>,
    pub target: Option<Rational>,
    /// Relative tolerance on the last row.
    pub tolerance: Option<Rational>,
}

impl ConvergenceTable {
    pub fn new(name: &str, index_names: &[&str]) -> Self {
        ConvergenceTable {
            name: name.to_string(),
            index_names: index_names.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            target: None,
            tolerance: None,
        }
    }

    pub fn with_target(mut self, target: Option<Rational>) -> Self {
        for r in &mut self.rows {
            if r.target.is_none() {
                r.target = target.clone();
            }
        }
        self.target = target;
        self
    }

    pub fn with_tolerance(mut self, tolerance: Rational) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    pub fn push(&mut self, index: Vec<i64>, value: Rational) {
        let target = self.target.clone();
        self.rows.push(Row { index, value, target });
    }

    pub fn push_with_target(&mut self, index: Vec<i64>, value: Rational, target: Option<Rational>) {
        self.rows.push(Row { index, value, target });
    }

    pub fn last(&self) -> Option<&Row> {
        self.rows.last()
    }

    pub fn last_value(&self) -> Option<&Rational> {
        self.rows.last().map(|r| &r.value)
    }

    pub fn value_at(&self, index: &[i64]) -> Option<&Rational> {
        self.rows.iter().find(|r| r.index == index).map(|r| &r.value)
    }

    /// `|last - target| / |target|`, or the absolute error when the target is 0.
    pub fn relative_error(&self) -> Option<Rational> {
        let row = self.last()?;
        let target = row.target.as_ref()?;
        let err = (&row.value - target).abs();
        Some(if target.is_zero() { err } else { err / target.abs() })
    }

    pub fn within_tolerance(&self) -> Option<bool> {
        Some(self.relative_error()? <= *self.tolerance.as_ref()?)
    }

    /// CSV with `#` manifest lines, a header and one line per row.
    pub fn to_csv(&self, manifest: &RunManifest) -> String {
        let mut out = manifest.comment_lines();
        let _ = writeln!(out, "# table: {}", self.name);
        if let Some(t) = &self.tolerance {
            let _ = writeln!(out, "# tolerance: {}", rational::format(t));
        }
        let mut header: Vec<&str> = self.index_names.iter().map(|s| s.as_str()).collect();
        header.extend(["value", "decimal", "target", "residual"]);
        let _ = writeln!(out, "{}", header.join(","));
        for r in &self.rows {
            let mut cells: Vec<String> = r.index.iter().map(|i| i.to_string()).collect();
            cells.push(rational::format(&r.value));
            cells.push(rational::decimal(&r.value, DECIMAL_DIGITS));
            cells.push(r.target.as_ref().map(rational::format).unwrap_or_default());
            cells.push(r.residual().as_ref().map(rational::format).unwrap_or_default());
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// A plain table of preformatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, manifest: &RunManifest) -> String {
        let mut out = manifest.comment_lines();
        let _ = writeln!(out, "# table: {}", self.name);
        let _ = writeln!(out, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

/// Provenance embedded in every output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub command: String,
    pub input_hash: String,
    pub caps: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str, input: &[u8]) -> Self {
        RunManifest {
            command: command.to_string(),
            input_hash: hex::encode(Sha256::digest(input)),
            caps: Vec::new(),
            seed: None,
            version: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        }
    }

    pub fn cap(mut self, key: &str, value: impl ToString) -> Self {
        self.caps.push((key.to_string(), value.to_string()));
        self
    }

    pub fn comment_lines(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# input_sha256: {}", self.input_hash);
        for (k, v) in &self.caps {
            let _ = writeln!(out, "# cap {k}: {v}");
        }
        if let Some(s) = self.seed {
            let _ = writeln!(out, "# seed: {s}");
        }
        let _ = writeln!(out, "# version: {}", self.version);
        out
    }
}
