//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};

// JSON has no infinities; clamp to the largest finite double so reports
// round-trip (an unbounded tolerance and an off-the-scale residual keep
// their meaning under the pass rule).
mod finite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(if v.is_finite() {
            *v
        } else if *v > 0.0 {
            f64::MAX
        } else {
            f64::MIN
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        f64::deserialize(d)
    }
}

/// Outcome of one verification run. `passed` always equals
/// `max_residual <= tolerance`; informational reports never gate a suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub samples: usize,
    #[serde(with = "finite")]
    pub max_residual: f64,
    #[serde(with = "finite")]
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default)]
    pub informational: bool,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(
        check_name: impl Into<String>,
        parameters: serde_json::Value,
        seed: u64,
        samples: usize,
        max_residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            check_name: check_name.into(),
            parameters,
            seed,
            samples,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
            informational: false,
            notes: vec![],
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self.notes.push("informational".into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// True when this report blocks a suite: a failed, non-informational check.
    pub fn gates(&self) -> bool {
        !self.passed && !self.informational
    }
}

/// Aggregate over a suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub informational: usize,
    pub all_normative_passed: bool,
}

pub fn summarize(reports: &[CheckReport]) -> SuiteSummary {
    let mut failed = vec![];
    let mut passed = 0;
    let mut informational = 0;
    for r in reports {
        if r.informational {
            informational += 1;
        }
        if r.passed {
            passed += 1;
        } else if !r.informational {
            failed.push(r.check_name.clone());
        }
    }
    SuiteSummary {
        total: reports.len(),
        passed,
        all_normative_passed: failed.is_empty(),
        failed,
        informational,
    }
}
