use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::pipeline::Stage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Preconditions of the check do not hold (for example no regular regime).
    ConditionallySkipped,
    /// The owning stage was not selected.
    NotRun,
    /// The owning stage raised an error.
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ConditionallySkipped => "SKIP",
            Status::NotRun => "NOT-RUN",
            Status::Error => "ERROR",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Error)
    }
}

/// One acceptance criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: u8,
    pub name: String,
    pub stage: Stage,
    pub status: Status,
    /// Headline number compared against the threshold.
    pub measured: Option<f64>,
    pub threshold: String,
    /// What property of the construction the check exercises.
    pub basis: String,
    /// Per-case measurements, classifier output or the error message.
    pub evidence: Vec<String>,
}

impl CheckRecord {
    pub fn line(&self) -> String {
        let m = match self.measured {
            Some(v) => format!("{v:.4e}"),
            None => "-".into(),
        };
        format!("{:>2}  {:<8} {:<38} {:>12}  {}", self.id, self.status.label(), self.name, m, self.threshold)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageStatus {
    Ran,
    NotRun,
}

/// Regime classification of one equilibrium problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeEntry {
    pub label: String,
    pub cells: usize,
    pub band: Option<(f64, f64)>,
    pub single_interval: bool,
    pub interior_unsaturated: bool,
    pub soft_edges: bool,
    pub strict_inequality: bool,
    pub regular: bool,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceReport {
    pub config_hash: String,
    pub precision_bits: u32,
    pub stages: BTreeMap<String, StageStatus>,
    pub records: Vec<CheckRecord>,
    pub regime: Vec<RegimeEntry>,
}

impl AcceptanceReport {
    pub fn record(&self, id: u8) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn any_failure(&self) -> bool {
        self.records.iter().any(|r| r.status.is_failure())
    }

    /// 0 when every enabled check passes or is conditionally skipped, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.any_failure())
    }

    pub fn text_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "config {}  precision {} bits", self.config_hash, self.precision_bits);
        let _ = writeln!(out, "{:>2}  {:<8} {:<38} {:>12}  threshold", "id", "status", "criterion", "measured");
        for r in &self.records {
            let _ = writeln!(out, "{}", r.line());
        }
        let count = |s: Status| self.records.iter().filter(|r| r.status == s).count();
        let _ = writeln!(
            out,
            "pass {}  fail {}  skipped {}  not-run {}  error {}",
            count(Status::Pass),
            count(Status::Fail),
            count(Status::ConditionallySkipped),
            count(Status::NotRun),
            count(Status::Error)
        );
        out
    }
}

/// Named table written as CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Fixed-width scientific formatting used in every table.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}
