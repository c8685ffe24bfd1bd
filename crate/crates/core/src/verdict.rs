//! Outcome of a single certified identity family.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// Stable identifier, e.g. `closure.bracket-vs-matrix`.
    pub id: String,
    /// The identity being certified, written out as a formula.
    pub relation: String,
    pub passed: bool,
    /// Number of individual cases (index tuples, states, ...) checked.
    pub cases: usize,
    /// Concrete counterexample for failures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// Measured constants and other facts worth keeping in the report.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(id: impl Into<String>, relation: impl Into<String>) -> Self {
        Verdict { id: id.into(), relation: relation.into(), passed: true, cases: 0, witness: None, notes: Vec::new() }
    }

    /// Records one case; the first failure's witness is kept.
    pub fn case(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok && self.passed {
            self.passed = false;
            self.witness = Some(witness());
        }
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn push_note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

pub fn all_passed(vs: &[Verdict]) -> bool {
    vs.iter().all(|v| v.passed)
}
