//! Structured verification reports.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Pass/fail record of one verification with its measured residuals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub pass: bool,
    /// Named measured quantities (residuals, fitted constants, profiles).
    pub measurements: BTreeMap<String, f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            pass: true,
            measurements: BTreeMap::new(),
            tolerance: None,
            detail: String::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn record(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.measurements.insert(key.into(), value);
        self
    }

    pub fn check(&mut self, condition: bool, detail: &str) -> &mut Self {
        if !condition {
            self.pass = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(detail);
        }
        self
    }
}

/// Envelope for CLI output: one command run, several reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub results: Vec<VerificationReport>,
    pub wall_time_s: f64,
    pub pass: bool,
}

impl ReportEnvelope {
    pub fn new(command: impl Into<String>) -> Self {
        ReportEnvelope {
            command: command.into(),
            params: BTreeMap::new(),
            results: Vec::new(),
            wall_time_s: 0.0,
            pass: true,
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, report: VerificationReport) {
        self.pass &= report.pass;
        self.results.push(report);
    }
}
