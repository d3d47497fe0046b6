//! Serializable run reports, as JSON or as aligned text.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use equiaffine::CheckReport;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl From<&CheckReport> for CheckEntry {
    fn from(r: &CheckReport) -> Self {
        CheckEntry { name: r.name.clone(), residual: r.residual, tolerance: r.tolerance, passed: r.passed }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PointReport {
    pub index: usize,
    pub u: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pick: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flipped: Option<bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub points: usize,
    pub point_errors: usize,
    pub failed_checks: usize,
    pub max_residuals: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub info: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckEntry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, chart: Option<String>, dim: Option<usize>, points: Vec<PointReport>, checks: Vec<CheckEntry>) -> Self {
        let mut max_residuals: BTreeMap<String, f64> = BTreeMap::new();
        let all_checks = points.iter().flat_map(|p| p.checks.iter()).chain(checks.iter());
        let mut failed_checks = 0;
        for c in all_checks {
            let slot = max_residuals.entry(c.name.clone()).or_insert(0.0);
            if c.residual > *slot || c.residual.is_nan() {
                *slot = c.residual;
            }
            failed_checks += usize::from(!c.passed);
        }
        let point_errors = points.iter().filter(|p| p.error.is_some()).count();
        let summary = Summary {
            passed: failed_checks == 0 && point_errors == 0,
            points: points.len(),
            point_errors,
            failed_checks,
            max_residuals,
        };
        Report { schema: SCHEMA, command: command.into(), chart, dim, info: BTreeMap::new(), points, checks, summary }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "schema {} {}", self.schema, self.command);
        if let Some(chart) = &self.chart {
            let _ = writeln!(s, "chart {chart} dim {}", self.dim.unwrap_or(0));
        }
        for (k, v) in &self.info {
            let _ = writeln!(s, "{k} {v:?}");
        }
        for p in &self.points {
            let _ = write!(s, "point {} u={:?}", p.index, p.u);
            for (label, v) in [("L1", p.l1), ("J", p.pick), ("chi", p.chi)] {
                if let Some(v) = v {
                    let _ = write!(s, " {label}={v:?}");
                }
            }
            for (k, v) in &p.extra {
                let _ = write!(s, " {k}={v:?}");
            }
            s.push('\n');
            if let Some(e) = &p.error {
                let _ = writeln!(s, "  ERROR {e}");
            }
            for c in &p.checks {
                write_check(&mut s, c, "  ");
            }
        }
        for c in &self.checks {
            write_check(&mut s, c, "");
        }
        let m = &self.summary;
        let _ = writeln!(
            s,
            "summary {} points={} point_errors={} failed_checks={}",
            if m.passed { "PASS" } else { "FAIL" },
            m.points,
            m.point_errors,
            m.failed_checks
        );
        for (k, v) in &m.max_residuals {
            let _ = writeln!(s, "  max {k} {v:?}");
        }
        s
    }
}

fn write_check(s: &mut String, c: &CheckEntry, indent: &str) {
    let status = if c.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(s, "{indent}{status} {} residual={:?} tol={:?}", c.name, c.residual, c.tolerance);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_collects_maxima() {
        let p = PointReport {
            checks: vec![
                CheckEntry { name: "gauss".into(), residual: 1e-9, tolerance: 1e-6, passed: true },
                CheckEntry { name: "gauss".into(), residual: 1e-3, tolerance: 1e-6, passed: false },
            ],
            ..PointReport::default()
        };
        let r = Report::new("check", Some("x".into()), Some(2), vec![p], Vec::new());
        assert!(!r.summary.passed);
        assert_eq!(r.summary.failed_checks, 1);
        assert_eq!(r.summary.max_residuals["gauss"], 1e-3);
        assert!(r.to_json().contains("\"schema\": 1"));
        assert!(r.to_text().starts_with("schema 1 check\n"));
    }
}
