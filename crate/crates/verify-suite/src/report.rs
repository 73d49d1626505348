use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Uncertifiable,
}

/// The offending input of a failed comparison and both coefficient values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub v: String,
    pub w: String,
    pub exponent: String,
    pub log_power: u32,
    pub expected: String,
    pub found: String,
}

/// Result of one named check over a declared finite range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// Number of exact comparisons made.
    pub cases: u64,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            cases: 0,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Record a failure; the first witness is kept.
    pub fn fail(&mut self, witness: Witness) {
        if self.status != Status::Fail {
            self.status = Status::Fail;
            self.witness = Some(witness);
        }
    }

    /// Downgrade a passing report; failures stay failures.
    pub fn uncertifiable(&mut self, note: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Uncertifiable;
        }
        self.notes.push(note.into());
    }

    /// A report for a check that could not run at all.
    pub fn errored(name: impl Into<String>, message: impl Into<String>) -> Self {
        let mut r = CheckReport::new(name);
        r.status = Status::Uncertifiable;
        r.notes.push(message.into());
        r
    }

    /// Fold in a partial report over a disjoint range of the same check.
    pub fn absorb(&mut self, other: CheckReport) {
        self.cases += other.cases;
        match other.status {
            Status::Fail => {
                if let Some(w) = other.witness {
                    self.fail(w);
                }
            }
            Status::Uncertifiable => {
                if self.status == Status::Pass {
                    self.status = Status::Uncertifiable;
                }
            }
            Status::Pass => {}
        }
        self.notes.extend(other.notes);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness(tag: &str) -> Witness {
        Witness {
            v: tag.into(),
            w: "1".into(),
            exponent: "-1".into(),
            log_power: 0,
            expected: "0".into(),
            found: "1".into(),
        }
    }

    #[test]
    fn first_witness_wins_and_failure_is_sticky() {
        let mut r = CheckReport::new("x");
        r.fail(witness("a"));
        r.fail(witness("b"));
        r.uncertifiable("late");
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.witness.as_ref().unwrap().v, "a");
    }

    #[test]
    fn absorb_merges_counts_and_status() {
        let mut r = CheckReport::new("x");
        r.cases = 2;
        let mut u = CheckReport::new("x");
        u.cases = 3;
        u.uncertifiable("cap");
        r.absorb(u);
        assert_eq!((r.cases, r.status), (5, Status::Uncertifiable));
        let mut f = CheckReport::new("x");
        f.fail(witness("c"));
        r.absorb(f);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.notes, vec!["cap".to_string()]);
    }

    #[test]
    fn json_shape() {
        let mut r = CheckReport::new("delta.D2").param("pMin", -2);
        r.fail(witness("e(-1)1"));
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["status"], "fail");
        assert_eq!(j["params"]["pMin"], "-2");
        assert_eq!(j["witness"]["logPower"], 0);
    }
}
