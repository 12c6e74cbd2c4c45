use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Outcome of one check: `pass` iff `lhs <= rhs (1 + slack)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub seed: u64,
    pub inputs: BTreeMap<String, f64>,
    #[serde(rename = "lhs")]
    pub measured_lhs: f64,
    #[serde(rename = "rhs")]
    pub bound_rhs: f64,
    pub pass: bool,
    pub slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(
        check_id: impl Into<String>,
        seed: u64,
        inputs: BTreeMap<String, f64>,
        measured_lhs: f64,
        bound_rhs: f64,
        pass: bool,
        slack: f64,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            seed,
            inputs,
            measured_lhs,
            bound_rhs,
            pass,
            slack,
            runtime_ms: None,
            note: None,
        }
    }

    /// Report whose verdict is `lhs <= rhs (1 + slack)`.
    pub fn compare(
        check_id: impl Into<String>,
        seed: u64,
        inputs: BTreeMap<String, f64>,
        lhs: f64,
        rhs: f64,
        slack: f64,
    ) -> Self {
        let pass = lhs <= rhs * (1.0 + slack);
        Self::new(check_id, seed, inputs, lhs, rhs, pass, slack)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Builds an `inputs` map from `(name, value)` pairs.
pub fn inputs<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Self::Text),
            "csv" => Ok(Self::Csv),
            "jsonl" => Ok(Self::Jsonl),
            other => Err(invalid(format!(
                "unknown format {other:?} (text, csv, jsonl)"
            ))),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn inputs_compact(inputs: &BTreeMap<String, f64>) -> String {
    inputs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Renders reports; the output depends only on the report contents.
pub fn format_reports(reports: &[VerificationReport], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Jsonl => {
            for r in reports {
                out.push_str(&serde_json::to_string(r).expect("reports serialize"));
                out.push('\n');
            }
        }
        OutputFormat::Csv => {
            out.push_str("check_id,seed,lhs,rhs,pass,slack,runtime_ms,inputs,note\n");
            for r in reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    csv_field(&r.check_id),
                    r.seed,
                    r.measured_lhs,
                    r.bound_rhs,
                    r.pass,
                    r.slack,
                    r.runtime_ms.map(|m| m.to_string()).unwrap_or_default(),
                    csv_field(&inputs_compact(&r.inputs)),
                    csv_field(r.note.as_deref().unwrap_or("")),
                );
            }
        }
        OutputFormat::Text => {
            let width = reports
                .iter()
                .map(|r| r.check_id.len())
                .max()
                .unwrap_or(8)
                .max(8);
            let _ = writeln!(
                out,
                "{:<width$}  {:>14}  {:>14}  result",
                "check", "lhs", "rhs"
            );
            for r in reports {
                let _ = writeln!(
                    out,
                    "{:<width$}  {:>14.6e}  {:>14.6e}  {}",
                    r.check_id,
                    r.measured_lhs,
                    r.bound_rhs,
                    if r.pass { "PASS" } else { "FAIL" }
                );
                if let Some(n) = &r.note {
                    let _ = writeln!(out, "{:<width$}  note: {n}", "");
                }
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            let _ = writeln!(out, "{} checks, {} failed", reports.len(), failed);
        }
    }
    out
}

/// A numeric table, e.g. a distribution scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.name);
        let header: Vec<String> = self.columns.iter().map(|c| format!("{c:>14}")).collect();
        out.push_str(&header.join(" "));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>14.6}")).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        VerificationReport::compare("demo", 7, inputs([("d", 2.0), ("n", 1.0)]), 1.0, 2.0, 0.0)
    }

    #[test]
    fn compare_matches_invariant() {
        assert!(sample().pass);
        let r = VerificationReport::compare("x", 0, BTreeMap::new(), 2.1, 2.0, 0.05);
        assert!(r.pass);
        let r = VerificationReport::compare("x", 0, BTreeMap::new(), 2.2, 2.0, 0.05);
        assert!(!r.pass);
    }

    #[test]
    fn jsonl_has_external_field_names() {
        let line = format_reports(&[sample()], OutputFormat::Jsonl);
        let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
        for key in ["check_id", "seed", "inputs", "lhs", "rhs", "pass", "slack"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v.get("runtime_ms").is_none());
    }

    #[test]
    fn csv_and_text() {
        let csv = format_reports(&[sample()], OutputFormat::Csv);
        assert_eq!(csv.lines().nth(1).unwrap(), "demo,7,1,2,true,0,,d=2;n=1,");
        let text = format_reports(&[sample()], OutputFormat::Text);
        assert!(text.contains("PASS") && text.ends_with("1 checks, 0 failed\n"));
        assert_eq!(
            "jsonl".parse::<OutputFormat>().unwrap(),
            OutputFormat::Jsonl
        );
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
