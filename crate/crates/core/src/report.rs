//! Results of structural audits.

use serde::{Deserialize, Serialize};

/// One offending cell, pair or element found by an audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub subject: String,
    pub detail: String,
}

impl Violation {
    pub fn new(subject: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            subject: subject.into(),
            detail: detail.into(),
        }
    }
}

/// Outcome of running one audit over a finite instance.
///
/// `checked` counts the cases examined, `skipped` the cases that could not
/// be decided on the truncation (never counted as passes or failures).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub checked: usize,
    pub skipped: usize,
    pub failures: usize,
    pub violations: Vec<Violation>,
}

/// Keep at most this many violations in a report; the count is still exact.
pub const MAX_RECORDED_VIOLATIONS: usize = 20;

impl AuditReport {
    pub fn new() -> Self {
        AuditReport::default()
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn fail(&mut self, subject: impl Into<String>, detail: impl Into<String>) {
        self.checked += 1;
        self.failures += 1;
        if self.violations.len() < MAX_RECORDED_VIOLATIONS {
            self.violations.push(Violation::new(subject, detail));
        }
    }

    /// Records a case: passes if `ok`, otherwise a violation built lazily.
    pub fn expect(&mut self, ok: bool, violation: impl FnOnce() -> (String, String)) {
        if ok {
            self.pass();
        } else {
            let (s, d) = violation();
            self.fail(s, d);
        }
    }

    pub fn is_clean(&self) -> bool {
        self.failures == 0
    }

    pub fn merge(&mut self, other: AuditReport) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.failures += other.failures;
        for v in other.violations {
            if self.violations.len() < MAX_RECORDED_VIOLATIONS {
                self.violations.push(v);
            }
        }
    }
}
