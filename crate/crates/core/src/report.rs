//! Structured pass/fail records for identity checks.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// On failure: where it failed and both sides' values.
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs one named check. The closure feeds comparisons into a [`Probe`];
    /// the first failure becomes the witness.
    ///
    /// Panics if `name` is already in the report.
    pub fn check(&mut self, name: impl Into<String>, f: impl FnOnce(&mut Probe)) {
        let name = name.into();
        assert!(
            self.get(&name).is_none(),
            "identity {name:?} recorded twice"
        );
        let mut probe = Probe::default();
        f(&mut probe);
        self.checks.push(Check {
            name,
            pass: probe.failure.is_none(),
            witness: probe.failure,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> Option<bool> {
        self.get(name).map(|c| c.pass)
    }

    pub fn names(&self) -> Vec<&str> {
        self.checks.iter().map(|c| c.name.as_str()).collect()
    }

    /// Appends another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            assert!(self.get(&c.name).is_none(), "identity {:?} recorded twice", c.name);
            self.checks.push(c);
        }
    }

    /// Pass/fail per name, for comparing two runs.
    pub fn outcome(&self) -> Vec<(String, bool)> {
        self.checks.iter().map(|c| (c.name.clone(), c.pass)).collect()
    }
}

#[derive(Debug, Default)]
pub struct Probe {
    failure: Option<Value>,
}

impl Probe {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    /// Records a failure unless one is already recorded.
    pub fn fail(&mut self, witness: Value) {
        if self.failure.is_none() {
            self.failure = Some(witness);
        }
    }

    pub fn eq<T: PartialEq + Serialize + ?Sized>(&mut self, at: Value, lhs: &T, rhs: &T) {
        if self.failure.is_none() && lhs != rhs {
            self.fail(json!({ "at": at, "lhs": lhs, "rhs": rhs }));
        }
    }

    pub fn holds(&mut self, at: Value, ok: bool, detail: impl FnOnce() -> Value) {
        if self.failure.is_none() && !ok {
            self.fail(json!({ "at": at, "detail": detail() }));
        }
    }

    /// Compares two fallible computations; an error on either side fails.
    pub fn eq_result<T: PartialEq + Serialize>(&mut self, at: Value, lhs: Result<T>, rhs: Result<T>) {
        if self.failure.is_some() {
            return;
        }
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => self.eq(at, &l, &r),
            (Err(e), _) | (_, Err(e)) => self.fail(json!({ "at": at, "error": e.to_string() })),
        }
    }

    /// Unwraps a fallible intermediate, failing the check on error.
    pub fn require<T>(&mut self, at: Value, value: Result<T>) -> Option<T> {
        match value {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(json!({ "at": at, "error": e.to_string() }));
                None
            }
        }
    }
}
