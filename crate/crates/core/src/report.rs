//! Named residual checks collected by the validators.

use serde::Serialize;

/// One measured discrepancy against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// Builds a check; NaN never passes.
    pub fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check { name: name.into(), value, tol, pass: value <= tol }
    }
}

/// An ordered list of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    /// Appends a check.
    pub fn push(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.checks.push(Check::new(name, value, tol));
    }

    /// True when every check passed.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Looks up a check by name.
    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends all checks of another report.
    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}
