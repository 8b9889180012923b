use std::fmt;

use serde::Serialize;

/// Cap on recorded violations per report; counting continues past it.
const MAX_RECORDED: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: String,
}

/// Outcome of a validity check: `ok` iff no axiom failed. Each violation names
/// the failing axiom and the offending tuple.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport { ok: true, violation_count: 0, violations: Vec::new() }
    }

    pub fn push(&mut self, axiom: &str, witness: impl Into<String>) {
        self.ok = false;
        self.violation_count += 1;
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(Violation { axiom: axiom.to_string(), witness: witness.into() });
        }
    }

    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        let hidden = other.violation_count - other.violations.len();
        for v in other.violations {
            self.push(&v.axiom, v.witness);
        }
        self.violation_count += hidden;
        if other.violation_count > 0 {
            self.ok = false;
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.witness)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        write!(f, "{} violation(s)", self.violation_count)?;
        for v in self.violations.iter().take(3) {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}
