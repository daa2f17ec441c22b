//! Machine-readable and tabular reports.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Ok,
    Pass,
    Fail,
    Inconclusive,
    Error,
    Info,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Ok => "ok",
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Error => "error",
            Outcome::Info => "info",
        }
    }
}

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stats {
    pub checks: usize,
    pub failures: usize,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct StatementReport {
    pub index: usize,
    pub line: usize,
    pub column: usize,
    pub kind: &'static str,
    pub statement: String,
    pub outcome: Outcome,
    pub message: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// The configuration a report was produced under. The worker count is
/// deliberately absent: it never changes results.
#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConfigEcho {
    pub seed: u64,
    pub max_poset: usize,
    pub max_group: usize,
    pub rank_cap: u32,
    pub max_entries: usize,
}

#[derive(Serialize, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub statements: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub errors: usize,
    pub exit_code: i32,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub config: ConfigEcho,
    pub statements: Vec<StatementReport>,
    pub summary: Summary,
}

impl Report {
    pub(crate) fn new(config: ConfigEcho, statements: Vec<StatementReport>) -> Report {
        let count = |o: Outcome| statements.iter().filter(|s| s.outcome == o).count();
        let mut summary = Summary {
            statements: statements.len(),
            passed: count(Outcome::Pass),
            failed: count(Outcome::Fail),
            inconclusive: count(Outcome::Inconclusive),
            errors: count(Outcome::Error),
            exit_code: 0,
        };
        summary.exit_code = if summary.errors > 0 {
            2
        } else if summary.failed > 0 {
            1
        } else if summary.inconclusive > 0 {
            3
        } else {
            0
        };
        Report { config, statements, summary }
    }

    /// 0 all pass, 1 an assertion failed, 2 a configuration error, 3 only inconclusive outcomes.
    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let rows: Vec<[String; 4]> = self
            .statements
            .iter()
            .map(|s| {
                [
                    format!("{}:{}", s.line, s.column),
                    s.kind.to_string(),
                    s.outcome.as_str().to_uppercase(),
                    s.statement.clone(),
                ]
            })
            .collect();
        let header = ["pos".to_string(), "kind".into(), "outcome".into(), "statement".into()];
        let mut widths = [0usize; 3];
        for r in std::iter::once(&header).chain(&rows) {
            for k in 0..3 {
                widths[k] = widths[k].max(r[k].chars().count());
            }
        }
        let line = |r: &[String; 4]| {
            format!(
                "{:<w0$}  {:<w1$}  {:<w2$}  {}",
                r[0],
                r[1],
                r[2],
                r[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2]
            )
        };
        let _ = writeln!(out, "{}", line(&header));
        for (s, r) in self.statements.iter().zip(&rows) {
            let _ = writeln!(out, "{}", line(r).trim_end());
            let indent = " ".repeat(widths[0] + widths[1] + widths[2] + 6);
            if !s.message.is_empty() {
                let _ = writeln!(out, "{indent}{}", s.message);
            }
            for (k, v) in &s.witness {
                let _ = writeln!(out, "{indent}{k}: {v}");
            }
        }
        let m = &self.summary;
        let _ = writeln!(
            out,
            "\n{} statements: {} passed, {} failed, {} inconclusive, {} errors (exit {})",
            m.statements, m.passed, m.failed, m.inconclusive, m.errors, m.exit_code
        );
        out
    }
}
