use std::fmt;

use serde::Serialize;

/// Outcome of an exhaustive or sampled identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub name: String,
    /// Number of individual cases compared.
    pub checked: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl VerifyReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerifyReport {
            name: name.into(),
            checked: 0,
            failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Records one comparison; only the first failure is kept.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.checked += other.checked;
        if self.failure.is_none() {
            self.failure = other.failure;
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "{}: PASS ({} cases)", self.name, self.checked),
            Some(why) => write!(f, "{}: FAIL after {} cases: {why}", self.name, self.checked),
        }
    }
}
