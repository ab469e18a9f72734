//! Pass/fail reports produced by the verification suites.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

/// An ordered list of checks; `overall` is the conjunction of their flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub rank: usize,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, rank: usize) -> Self {
        VerificationReport {
            suite: suite.into(),
            rank,
            checks: Vec::new(),
            overall: true,
        }
    }

    pub fn check(&mut self, id: impl Into<String>, expected: impl ToString, observed: impl ToString, pass: bool) {
        self.overall &= pass;
        self.checks.push(Check {
            id: id.into(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass,
        });
    }

    /// Records an equality check between two displayable values.
    pub fn check_eq<T: PartialEq + fmt::Display>(&mut self, id: impl Into<String>, expected: T, observed: T) {
        let pass = expected == observed;
        self.check(id, expected, observed, pass);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Plain-text table, one check per line.
    pub fn to_table(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} rank {}: {}",
            self.suite,
            self.rank,
            if self.overall { "PASS" } else { "FAIL" }
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {}: expected {}, observed {}",
                if c.pass { "pass" } else { "FAIL" },
                c.id,
                c.expected,
                c.observed
            )?;
        }
        Ok(())
    }
}
