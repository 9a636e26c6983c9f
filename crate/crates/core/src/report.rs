//! Pass/fail records produced by the verifiers.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// The verifiable claims, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    Qandf,
    Quarters,
    Firsthalf,
    Nblock,
    Pairs,
    Fixedpoint,
    Primitivity,
    Theorem,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::Qandf,
        Claim::Quarters,
        Claim::Firsthalf,
        Claim::Nblock,
        Claim::Pairs,
        Claim::Fixedpoint,
        Claim::Primitivity,
        Claim::Theorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::Qandf => "qandf",
            Claim::Quarters => "quarters",
            Claim::Firsthalf => "firsthalf",
            Claim::Nblock => "nblock",
            Claim::Pairs => "pairs",
            Claim::Fixedpoint => "fixedpoint",
            Claim::Primitivity => "primitivity",
            Claim::Theorem => "theorem",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Claim::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown claim `{s}`"))
    }
}

/// One elementary check inside a claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// All checks for one `(m, claim)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub m: u32,
    pub claim: Claim,
    pub checks: Vec<Check>,
    /// Informational remarks that do not affect the outcome.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ClaimResult {
    pub fn new(m: u32, claim: Claim) -> Self {
        Self { m, claim, checks: Vec::new(), notes: Vec::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ClaimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.checks.iter().filter(|c| c.passed).count();
        write!(
            f,
            "{} m={} {} ({}/{} checks)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.m,
            self.claim,
            ok,
            self.checks.len()
        )?;
        for c in self.failures() {
            write!(f, "\n    failed {}: {}", c.name, c.detail)?;
        }
        for n in &self.notes {
            write!(f, "\n    note: {n}")?;
        }
        Ok(())
    }
}

/// Results ordered by `m`, then claim.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub results: Vec<ClaimResult>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, result: ClaimResult) {
        self.results.push(result);
        self.results.sort_by_key(|r| (r.m, r.claim));
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.results.extend(other.results);
        self.results.sort_by_key(|r| (r.m, r.claim));
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(ClaimResult::passed)
    }

    pub fn passed_count(&self) -> usize {
        self.results.iter().filter(|r| r.passed()).count()
    }

    pub fn failed_count(&self) -> usize {
        self.results.len() - self.passed_count()
    }

    pub fn get(&self, m: u32, claim: Claim) -> Option<&ClaimResult> {
        self.results.iter().find(|r| r.m == m && r.claim == claim)
    }
}

impl From<ClaimResult> for VerificationReport {
    fn from(r: ClaimResult) -> Self {
        Self { results: vec![r] }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        write!(f, "{} passed, {} failed", self.passed_count(), self.failed_count())
    }
}
