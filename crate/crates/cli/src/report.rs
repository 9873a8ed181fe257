//! Versioned JSON reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Current report schema.
pub const SCHEMA: u32 = 1;

/// Which side of the tolerance counts as a pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gate {
    /// Pass iff `max_residual < tolerance`.
    Below,
    /// Negative control: pass iff `max_residual > tolerance`.
    Above,
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Always [`SCHEMA`].
    pub schema: u32,
    /// Check name, e.g. `dnls.soliton.equations`.
    pub check: String,
    /// Parameters that determine the check, rendered as text.
    pub params: BTreeMap<String, String>,
    /// Largest residual observed (exact checks count non-vanishing terms).
    pub max_residual: f64,
    /// Site `(n, a)` of the largest residual, when meaningful.
    pub site_argmax: Option<[i64; 2]>,
    /// Gate tolerance.
    pub tolerance: f64,
    /// Gate direction.
    pub gate: Gate,
    /// Whether the gate is satisfied.
    pub pass: bool,
    /// Wall time in seconds.
    pub wall_time: f64,
}

impl Report {
    /// A report gated by `max_residual < tolerance`.
    pub fn below(check: &str, max_residual: f64, tolerance: f64) -> Self {
        Self::gated(check, max_residual, tolerance, Gate::Below)
    }

    /// A negative-control report gated by `max_residual > tolerance`.
    pub fn above(check: &str, max_residual: f64, tolerance: f64) -> Self {
        Self::gated(check, max_residual, tolerance, Gate::Above)
    }

    fn gated(check: &str, max_residual: f64, tolerance: f64, gate: Gate) -> Self {
        let pass = match gate {
            Gate::Below => max_residual < tolerance,
            Gate::Above => max_residual > tolerance,
        };
        Self {
            schema: SCHEMA,
            check: check.to_string(),
            params: BTreeMap::new(),
            max_residual,
            site_argmax: None,
            tolerance,
            gate,
            pass,
            wall_time: 0.0,
        }
    }

    /// Adds a parameter.
    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Records the argmax site.
    pub fn at(mut self, site: (isize, isize)) -> Self {
        self.site_argmax = Some([site.0 as i64, site.1 as i64]);
        self
    }

    /// Records the wall time elapsed since `start`.
    pub fn timed(mut self, start: Instant) -> Self {
        self.wall_time = start.elapsed().as_secs_f64();
        self
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let op = match self.gate {
            Gate::Below => "<",
            Gate::Above => ">",
        };
        format!(
            "{} {}: max_residual = {:.3e} ({op} {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.max_residual,
            self.tolerance
        )
    }
}

/// Sorts reports by check name (stable for equal names).
pub fn sort_reports(reports: &mut [Report]) {
    reports.sort_by(|a, b| a.check.cmp(&b.check));
}

/// Whether every report passes.
pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// Pretty JSON array of reports.
pub fn to_json(reports: &[Report]) -> serde_json::Result<String> {
    serde_json::to_string_pretty(reports)
}
