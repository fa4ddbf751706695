//! Verification reports, emitted as JSON and as aligned text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Hex SHA-256 of the input bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// One check. A failed check always carries `clause`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    /// What the check establishes, in words.
    pub reference: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clause: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn pass(name: &str, reference: &str) -> Self {
        CheckRecord {
            name: name.into(),
            component: None,
            reference: reference.into(),
            passed: true,
            lhs: None,
            rhs: None,
            tolerance: None,
            clause: None,
            detail: None,
        }
    }

    pub fn fail(name: &str, reference: &str, clause: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckRecord {
            passed: false,
            clause: Some(clause.into()),
            detail: Some(detail.into()),
            ..CheckRecord::pass(name, reference)
        }
    }

    /// Passes iff `holds`; on failure the clause is the check name.
    pub fn compare(name: &str, reference: &str, lhs: impl ToString, rhs: impl ToString, holds: bool) -> Self {
        let mut r = if holds {
            CheckRecord::pass(name, reference)
        } else {
            CheckRecord::fail(name, reference, name, "inequality fails")
        };
        r.lhs = Some(lhs.to_string());
        r.rhs = Some(rhs.to_string());
        r
    }

    pub fn in_component(mut self, c: usize) -> Self {
        self.component = Some(c);
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComponentTelemetry {
    pub component: usize,
    pub joints: usize,
    pub lines: usize,
    pub iterations: u64,
    pub newton_steps: u64,
    pub perturbation_steps: u64,
    pub final_spread: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// Hex SHA-256 of the input file, empty when there is none.
    pub input_digest: String,
    pub checks: Vec<CheckRecord>,
    pub telemetry: Vec<ComponentTelemetry>,
    /// Run parameters such as the degree bound used.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str, input_digest: String) -> Self {
        RunReport {
            command: command.into(),
            input_digest,
            checks: Vec::new(),
            telemetry: Vec::new(),
            notes: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if !self.input_digest.is_empty() {
            let _ = writeln!(out, "input sha256: {}", self.input_digest);
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        let label = |c: &CheckRecord| match c.component {
            Some(i) => format!("[{i}] {}", c.name),
            None => c.name.clone(),
        };
        let width = self.checks.iter().map(|c| label(c).len()).max().unwrap_or(0);
        for c in &self.checks {
            let mut line = format!("{:<width$}  {}", label(c), if c.passed { "PASS" } else { "FAIL" });
            if let (Some(l), Some(r)) = (&c.lhs, &c.rhs) {
                let _ = write!(line, "  lhs={l} rhs={r}");
            }
            if let Some(t) = c.tolerance {
                let _ = write!(line, "  tol={t:e}");
            }
            if let Some(cl) = &c.clause {
                let _ = write!(line, "  clause={cl}");
            }
            if let Some(d) = &c.detail {
                let _ = write!(line, "  ({d})");
            }
            let _ = writeln!(out, "{line}");
        }
        for t in &self.telemetry {
            let _ = writeln!(
                out,
                "component {}: J={} L={} iterations={} newton={} perturbation={} spread={:.3e}",
                t.component, t.joints, t.lines, t.iterations, t.newton_steps, t.perturbation_steps, t.final_spread
            );
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}
