use serde::Serialize;

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// Worst observed residual for numeric checks; `None` for exact ones.
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl IdentityCheck {
    pub fn numeric(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: residual.is_finite() && residual <= tolerance,
            residual: Some(residual),
            tolerance: Some(tolerance),
            detail: String::new(),
        }
    }

    pub fn exact(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, residual: None, tolerance: None, detail: detail.into() }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Collection of identity checks, in the order they were run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: IdentityCheck) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: IdentityReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check: `PASS name (residual ... <= tol)`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(tag);
            out.push(' ');
            out.push_str(&c.name);
            if let (Some(r), Some(t)) = (c.residual, c.tolerance) {
                out.push_str(&format!(" (residual {r:.3e}, tol {t:.1e})"));
            }
            if !c.detail.is_empty() {
                out.push_str(&format!(" [{}]", c.detail));
            }
            out.push('\n');
        }
        out
    }
}
