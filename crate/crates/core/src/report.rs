//! Pass/fail bookkeeping shared by every verification routine.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// First offending coordinates, when the check compares matrices or
    /// vectors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn record(&mut self, name: impl Into<String>, passed: bool) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: None,
            counterexample: None,
        });
        self
    }

    pub fn record_with(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: Some(detail.into()),
            counterexample: None,
        });
        self
    }

    /// Records exact equality of two matrices, keeping the first differing
    /// entry as counterexample.
    pub fn matrices_equal(
        &mut self,
        name: impl Into<String>,
        left: &RationalMatrix,
        right: &RationalMatrix,
    ) -> bool {
        let diff = left.first_difference(right);
        let detail = diff.map(|(i, j)| {
            if i < left.rows() && j < left.cols() {
                format!("{} != {}", left.get(i, j), right.get(i, j))
            } else {
                format!(
                    "shape {}x{} vs {}x{}",
                    left.rows(),
                    left.cols(),
                    right.rows(),
                    right.cols()
                )
            }
        });
        self.checks.push(Check {
            name: name.into(),
            passed: diff.is_none(),
            detail,
            counterexample: diff.map(|(i, j)| vec![i, j]),
        });
        diff.is_none()
    }

    pub fn record_at(&mut self, name: impl Into<String>, at: Option<Vec<usize>>) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            passed: at.is_none(),
            detail: None,
            counterexample: at,
        });
        self
    }

    /// Appends another report's checks, prefixing their names with its
    /// subject.
    pub fn absorb(&mut self, other: VerificationReport) {
        for mut c in other.checks {
            c.name = format!("{}/{}", other.subject, c.name);
            self.checks.push(c);
        }
    }

    /// Turns the first failure into an [`Error::Invariant`].
    pub fn into_result(self) -> Result<Self> {
        let first = self.failures().next().cloned();
        match first {
            None => Ok(self),
            Some(c) => Err(Error::Invariant(format!(
                "{}: {}{}",
                self.subject,
                c.name,
                c.counterexample
                    .as_ref()
                    .map(|at| format!(" at {at:?}"))
                    .unwrap_or_default()
            ))),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "[{tag}] {}", c.name)?;
            if let Some(at) = &c.counterexample {
                write!(f, " at {at:?}")?;
            }
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
