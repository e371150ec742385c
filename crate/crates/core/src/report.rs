//! Verification reports: named checks with a pass flag and a residual.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Largest residual observed for this check; 0 for purely logical checks.
    pub residual: f64,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, residual: f64) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            passed,
            residual,
            note: None,
        });
        self
    }

    /// Informational entry that always passes.
    pub fn record(&mut self, name: impl Into<String>, note: impl Into<String>) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            passed: true,
            residual: 0.0,
            note: Some(note.into()),
        });
        self
    }

    pub fn note_last(&mut self, note: impl Into<String>) -> &mut Self {
        if let Some(c) = self.checks.last_mut() {
            c.note = Some(note.into());
        }
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let flag = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "  [{flag}] {:<44} residual {:.3e}", c.name, c.residual)?;
            if let Some(n) = &c.note {
                write!(f, "  ({n})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
