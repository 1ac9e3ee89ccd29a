use std::fmt;

use serde::Serialize;

use crate::cover::Address;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Branching,
    Ancestry,
    SmallSize,
    SupergaleInequality,
    GaleEquality,
    InfiniteCapital,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    #[serde(serialize_with = "crate::cover::serialize_address")]
    pub address: Address,
    pub kind: ViolationKind,
    pub detail: String,
}

/// Outcome of an exhaustive or support-driven check. Violations are entries,
/// never errors.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub depth: usize,
    /// Elements (or gale nodes) examined explicitly.
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
    /// Root capital `d(root) · diam(root)^s`, for gale checks.
    pub root_capital: Option<String>,
    /// True when every pass/fail decision was made in exact arithmetic.
    pub exact: bool,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>, depth: usize) -> Self {
        ValidationReport {
            subject: subject.into(),
            depth,
            checked: 0,
            violations: Vec::new(),
            notes: Vec::new(),
            root_capital: None,
            exact: true,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, address: Address, kind: ViolationKind, detail: impl Into<String>) {
        self.violations.push(Violation { address, kind, detail: detail.into() });
    }

    pub fn violations_of(&self, kind: ViolationKind) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{verdict} {}: {} checked to depth {}, {} violation(s)",
            self.subject,
            self.checked,
            self.depth,
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "  {:?} at {:?}: {}", v.kind, v.address.to_string(), v.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
