//! Verification reports: named checks with witnesses or counterexamples.
//!
//! Reports serialize to canonical JSON — object keys sorted, rationals in
//! lowest terms — so a run with the same configuration and seed produces
//! byte-identical output regardless of execution mode.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Witness data on success, counterexample payload on failure.
    pub witness: Value,
}

impl CheckResult {
    pub fn passed(name: &str, witness: Value) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            pass: true,
            witness,
        }
    }

    pub fn failed(name: &str, witness: Value) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            pass: false,
            witness,
        }
    }

    /// Builds a result from a list of per-case counterexamples: passes when
    /// the list is empty.  Keeps at most three counterexamples in the
    /// witness, plus the total count and the caller's context.
    pub fn from_failures(name: &str, context: Value, failures: Vec<Value>) -> CheckResult {
        let pass = failures.is_empty();
        let witness = json!({
            "context": context,
            "failureCount": failures.len(),
            "counterexamples": failures.into_iter().take(3).collect::<Vec<_>>(),
        });
        CheckResult {
            name: name.to_string(),
            pass,
            witness,
        }
    }
}

/// A verification report for one instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub instance: Value,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(instance: Value, checks: Vec<CheckResult>) -> Report {
        Report { instance, checks }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Canonical serialization: pretty JSON with sorted object keys and a
    /// trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_json_is_stable_and_sorted() {
        let r = Report::new(
            json!({"kind": "demo", "atoms": 2}),
            vec![
                CheckResult::passed("dense", json!({"zeta": "1/2", "alpha": "x"})),
                CheckResult::from_failures("compact", json!({"mode": "exhaustive"}), vec![]),
            ],
        );
        assert!(r.all_pass());
        let a = r.to_canonical_json();
        let b = r.to_canonical_json();
        assert_eq!(a, b);
        // keys inside objects come out sorted
        let alpha = a.find("\"alpha\"").unwrap();
        let zeta = a.find("\"zeta\"").unwrap();
        assert!(alpha < zeta);
        // round-trip
        let back: Report = serde_json::from_str(&a).unwrap();
        assert_eq!(back.to_canonical_json(), a);
    }

    #[test]
    fn failures_flip_the_flag_and_are_truncated() {
        let fails: Vec<Value> = (0..10).map(|i| json!({ "case": i })).collect();
        let c = CheckResult::from_failures("law", json!({}), fails);
        assert!(!c.pass);
        assert_eq!(c.witness["failureCount"], 10);
        assert_eq!(c.witness["counterexamples"].as_array().unwrap().len(), 3);
    }
}
