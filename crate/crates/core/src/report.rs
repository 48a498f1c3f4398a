//! Verification reports shared by every checker.

use serde::Serialize;
use serde_json::{Map, Value};

/// Outcome of one check: `{check, params, pass, counterexample?, stats}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub params: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    pub stats: Value,
}

impl Report {
    pub fn new(check: &str) -> Report {
        Report {
            check: check.to_string(),
            params: Value::Object(Map::new()),
            pass: true,
            counterexample: None,
            stats: Value::Object(Map::new()),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Report {
        set(&mut self.params, key, value);
        self
    }

    pub fn param_mut(&mut self, key: &str, value: impl Serialize) {
        set(&mut self.params, key, value);
    }

    pub fn stat(&mut self, key: &str, value: impl Serialize) {
        set(&mut self.stats, key, value);
    }

    /// Marks the report failed with a witness, unless already failed.
    pub fn fail(&mut self, witness: Value) {
        if self.pass {
            self.pass = false;
            self.counterexample = Some(witness);
        }
    }

    /// Folds `other` into `self`: failure and the first witness propagate,
    /// `other`'s full report is recorded under `stats.parts`.
    pub fn absorb(&mut self, other: Report) {
        if !other.pass {
            self.fail(serde_json::json!({
                "check": other.check,
                "counterexample": other.counterexample,
            }));
        }
        let parts = self
            .stats
            .as_object_mut()
            .expect("stats is an object")
            .entry("parts")
            .or_insert_with(|| Value::Array(Vec::new()));
        if let Value::Array(a) = parts {
            a.push(serde_json::to_value(other).expect("serializable"));
        }
    }
}

fn set(target: &mut Value, key: &str, value: impl Serialize) {
    target
        .as_object_mut()
        .expect("object")
        .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_keeps_first_witness() {
        let mut r = Report::new("demo").param("bound", 3);
        r.fail(Value::from("ab"));
        r.fail(Value::from("ba"));
        assert!(!r.pass);
        assert_eq!(r.counterexample, Some(Value::from("ab")));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"check\":\"demo\""));
        let mut outer = Report::new("outer");
        outer.absorb(r);
        assert!(!outer.pass);
    }
}
