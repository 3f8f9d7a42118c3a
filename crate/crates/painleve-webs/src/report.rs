//! Structured verification reports: one entry per check, serializable to a
//! stable JSON schema, with a plain-text rendering for terminals.

use serde::{Deserialize, Serialize};

/// Verdict of a single report entry. `Info` marks commentary (a warning or a
/// note) that does not count against `all_pass`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        };
        f.write_str(s)
    }
}

/// One named check with its verdict and optional expected/actual payloads.
/// Field order is part of the JSON schema; do not reorder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub check: String,
    pub status: Status,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

/// A command's verification report. Entries appear in the order they were
/// recorded so text and JSON renderings agree line for line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub engine_version: String,
    pub elapsed_ms: u128,
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: 0,
            entries: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        check: impl Into<String>,
        status: Status,
        expected: Option<String>,
        actual: Option<String>,
    ) {
        self.entries.push(ReportEntry {
            check: check.into(),
            status,
            expected,
            actual,
        });
    }

    /// Records a pass/fail entry in one step.
    pub fn check(
        &mut self,
        check: impl Into<String>,
        ok: bool,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) {
        self.push(
            check,
            if ok { Status::Pass } else { Status::Fail },
            Some(expected.into()),
            Some(actual.into()),
        );
    }

    pub fn info(&mut self, check: impl Into<String>, note: impl Into<String>) {
        self.push(check, Status::Info, None, Some(note.into()));
    }

    pub fn set_elapsed_ms(&mut self, ms: u128) {
        self.elapsed_ms = ms;
    }

    /// True when no entry failed (`Info` entries are neutral).
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn n_failed(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.status == Status::Fail)
            .count()
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "# {} (engine {})", self.command, self.engine_version).unwrap();
        for e in &self.entries {
            write!(out, "[{}] {}", e.status, e.check).unwrap();
            match (&e.expected, &e.actual) {
                (Some(x), Some(a)) if e.status == Status::Fail => {
                    write!(out, ": expected {x}, got {a}").unwrap()
                }
                (_, Some(a)) if e.status == Status::Info => write!(out, ": {a}").unwrap(),
                _ => {}
            }
            writeln!(out).unwrap();
        }
        let verdict = if self.all_pass() { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{}: {} checks, {} failed, {} ms",
            verdict,
            self.entries.len(),
            self.n_failed(),
            self.elapsed_ms
        )
        .unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
