//! JSON report wrapping a list of check reports.

use std::time::{SystemTime, UNIX_EPOCH};

use rigidlab_core::verify::{CheckReport, Status};
use serde::Serialize;

pub const SCHEMA: &str = "rigidlab/1";

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub schema: &'static str,
    pub version: &'static str,
    pub command_line: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    /// `fail` iff some check failed; `probabilistic_pass` if some passing
    /// check was sampled.
    pub status: Status,
    pub probabilistic: bool,
    pub checks: Vec<CheckReport>,
}

impl ReportEnvelope {
    pub fn new(command_line: String, checks: Vec<CheckReport>) -> Self {
        let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        ReportEnvelope {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command_line,
            timestamp,
            status,
            probabilistic: checks.iter().any(|c| c.status == Status::ProbabilisticPass),
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}
