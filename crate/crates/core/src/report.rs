//! Per-claim verification summaries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Coverage label attached to every report: a finite grid was checked, nothing more.
pub const COVERAGE: &str = "grid-verified";

/// Outcome of checking one inequality or identity over a parameter grid.
///
/// `worst_margin` is the smallest margin seen (a violation shows up as a value
/// below `-tolerance`); `worst_point` names the parameters where it occurred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub grid: String,
    pub worst_margin: f64,
    pub worst_point: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub points_checked: usize,
    pub coverage: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Streaming accumulator for a [`VerificationReport`].
///
/// Points must be fed in a deterministic order; ties keep the first point.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    claim: String,
    grid: String,
    tolerance: f64,
    worst: Option<(f64, BTreeMap<String, f64>)>,
    count: usize,
    failed: bool,
    notes: Vec<String>,
}

impl ReportBuilder {
    pub fn new(claim: impl Into<String>, grid: impl Into<String>, tolerance: f64) -> Self {
        Self {
            claim: claim.into(),
            grid: grid.into(),
            tolerance,
            worst: None,
            count: 0,
            failed: false,
            notes: Vec::new(),
        }
    }

    /// Record one margin. NaN counts as a failure and becomes the worst point.
    pub fn record(&mut self, margin: f64, point: &[(&str, f64)]) {
        self.count += 1;
        let bad = margin.is_nan() || margin < -self.tolerance;
        self.failed |= bad;
        let replace = match &self.worst {
            None => true,
            Some((w, _)) => margin.is_nan() && !w.is_nan() || margin < *w,
        };
        if replace {
            let p = point.iter().map(|(k, v)| ((*k).to_string(), *v)).collect();
            self.worst = Some((margin, p));
        }
    }

    /// Mark the claim as failed without a numeric margin (for example an
    /// evaluation error at some grid point).
    pub fn fail(&mut self, note: impl Into<String>) {
        self.failed = true;
        self.notes.push(note.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn finish(self) -> VerificationReport {
        let (worst_margin, worst_point) = self.worst.unwrap_or((f64::INFINITY, BTreeMap::new()));
        VerificationReport {
            claim: self.claim,
            grid: self.grid,
            worst_margin,
            worst_point,
            tolerance: self.tolerance,
            pass: !self.failed && self.count > 0,
            points_checked: self.count,
            coverage: COVERAGE.to_string(),
            notes: self.notes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_point_and_verdict() {
        let mut b = ReportBuilder::new("c", "g", 1e-9);
        b.record(0.5, &[("x", 1.0)]);
        b.record(-1e-12, &[("x", 2.0)]);
        b.record(0.1, &[("x", 3.0)]);
        let r = b.finish();
        assert!(r.pass);
        assert_eq!(r.worst_point["x"], 2.0);
        assert_eq!(r.points_checked, 3);

        let mut b = ReportBuilder::new("c", "g", 1e-9);
        b.record(-1e-6, &[("x", 1.0)]);
        assert!(!b.finish().pass);

        let mut b = ReportBuilder::new("c", "g", 1e-9);
        b.record(f64::NAN, &[]);
        assert!(!b.finish().pass);
        assert!(!ReportBuilder::new("c", "g", 1.0).finish().pass);
    }
}
