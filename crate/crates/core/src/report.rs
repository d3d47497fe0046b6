use std::fmt;

/// One residual compared against its tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckReport {
    /// A NaN residual never passes.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckReport { name: name.into(), residual, tolerance, passed: residual <= tolerance }
    }

    /// Same residual judged against another tolerance.
    pub fn with_tolerance(&self, tolerance: f64) -> Self {
        CheckReport::new(self.name.clone(), self.residual, tolerance)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} residual={:.3e} tol={:.1e}", self.name, self.residual, self.tolerance)
    }
}
