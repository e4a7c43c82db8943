use std::fmt::{self, Write as _};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use picard_core::Check;

/// Process exit status, in increasing severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    IdentityFailed,
    Hypothesis,
    ResourceGuard,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::IdentityFailed => 1,
            Status::Hypothesis => 2,
            Status::ResourceGuard => 3,
        }
    }

    pub fn from_checks(checks: &[Check]) -> Status {
        if checks.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::IdentityFailed
        }
    }
}

/// A refused run: a violated hypothesis or a resource guard.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub status: Status,
    pub hypothesis: String,
    pub message: String,
}

impl CliError {
    pub fn new(status: Status, hypothesis: &str, message: impl Into<String>) -> CliError {
        CliError {
            status,
            hypothesis: hypothesis.to_string(),
            message: message.into(),
        }
    }

    pub fn hypothesis(name: &str, message: impl Into<String>) -> CliError {
        CliError::new(Status::Hypothesis, name, message)
    }

    pub fn guard(name: &str, message: impl Into<String>) -> CliError {
        CliError::new(Status::ResourceGuard, name, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.status {
            Status::ResourceGuard => "resource guard",
            _ => "hypothesis violated",
        };
        write!(f, "{kind} ({}): {}", self.hypothesis, self.message)
    }
}

impl std::error::Error for CliError {}

/// Top-level shape of every JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<C, R> {
    pub config: C,
    pub results: R,
    pub checks: Vec<Check>,
}

/// Rendered output together with its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub text: String,
}

/// Comment line opening plain output, empty under --reproducible.
pub fn header(command: &str, reproducible: bool) -> String {
    if reproducible {
        return String::new();
    }
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("# picard {command}, generated at unix time {secs}\n")
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn to_csv<T: Serialize>(rows: &[T], headers: &[&str]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(headers).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn write_checks(out: &mut String, checks: &[Check]) {
    let _ = writeln!(out, "checks:");
    for c in checks {
        let mark = if c.pass { "pass" } else { "FAIL" };
        let _ = writeln!(out, "  [{mark}] {}: {} = {}", c.name, c.lhs, c.rhs);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        let _ = writeln!(out, "all {} checks pass", checks.len());
    } else {
        let _ = writeln!(out, "{failed} of {} checks FAILED", checks.len());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use picard_core::Exact;

    #[test]
    fn statuses() {
        assert_eq!(Status::ResourceGuard.code(), 3);
        let ok = Check::new("a", Exact::int(1), Exact::int(1));
        let bad = Check::new("b", Exact::int(1), Exact::int(2));
        assert_eq!(Status::from_checks(&[ok.clone()]), Status::Pass);
        assert_eq!(Status::from_checks(&[ok, bad]), Status::IdentityFailed);
        assert_eq!(Status::from_checks(&[]), Status::Pass);
    }

    #[test]
    fn header_suppressed() {
        assert_eq!(header("report", true), "");
        assert!(header("report", false).starts_with("# picard report"));
    }
}
