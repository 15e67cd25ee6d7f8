use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Display;

use serde::Serialize;

use crate::graph::Edge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// No failure found, but some part of the check was sampled.
    ProbabilisticPass,
    Fail,
}

/// Evidence attached to a failing check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub description: String,
    pub edges: Vec<Edge>,
}

impl Witness {
    pub fn new(description: impl Into<String>, edges: Vec<Edge>) -> Self {
        Witness { description: description.into(), edges }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub status: Status,
    pub details: Vec<String>,
    pub measurements: BTreeMap<String, i64>,
    /// Present exactly when `status` is `Fail`.
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            inputs: BTreeMap::new(),
            status: Status::Pass,
            details: Vec::new(),
            measurements: BTreeMap::new(),
            witness: None,
        }
    }

    pub fn with_input(mut self, key: &str, value: impl Display) -> Self {
        self.input(key, value);
        self
    }

    pub fn input(&mut self, key: &str, value: impl Display) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn detail(&mut self, text: impl Into<String>) {
        self.details.push(text.into());
    }

    pub fn measure(&mut self, key: &str, value: impl TryInto<i64>) {
        self.measurements.insert(key.to_string(), value.try_into().unwrap_or(i64::MAX));
    }

    /// Marks the check failed. The first witness is kept; later ones are
    /// recorded as details.
    pub fn fail(&mut self, witness: Witness) {
        self.status = Status::Fail;
        match &self.witness {
            None => self.witness = Some(witness),
            Some(_) => self.details.push(alloc::format!("also: {}", witness.description)),
        }
    }

    /// Fails with `witness` unless `ok`.
    pub fn require(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        if !ok {
            self.fail(witness());
        }
    }

    pub fn mark_probabilistic(&mut self) {
        if self.status == Status::Pass {
            self.status = Status::ProbabilisticPass;
        }
    }

    /// Records that a generic claim was verified on one sampled instance.
    pub fn sampled_instance(&mut self, seed: u64) {
        self.detail(alloc::format!("holds for sampled instance seed={seed}"));
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Absorbs a sub-report: worst status wins, details are prefixed.
    pub fn merge(&mut self, sub: CheckReport) {
        for d in sub.details {
            self.details.push(alloc::format!("{}: {d}", sub.name));
        }
        for (k, v) in sub.measurements {
            self.measurements.insert(alloc::format!("{}.{k}", sub.name), v);
        }
        match sub.status {
            Status::Fail => {
                let w = sub.witness.unwrap_or_else(|| Witness::new("sub-check failed", Vec::new()));
                self.fail(Witness::new(alloc::format!("{}: {}", sub.name, w.description), w.edges));
            }
            Status::ProbabilisticPass => self.mark_probabilistic(),
            Status::Pass => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fail_carries_witness_and_dominates() {
        let mut r = CheckReport::new("x").with_input("d", 2);
        r.mark_probabilistic();
        assert_eq!(r.status, Status::ProbabilisticPass);
        r.require(false, || Witness::new("bad", alloc::vec![Edge::new(1, 2)]));
        r.mark_probabilistic();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.witness.as_ref().unwrap().edges, [Edge::new(1, 2)]);
        r.fail(Witness::new("worse", Vec::new()));
        assert_eq!(r.witness.unwrap().description, "bad");
    }

    #[test]
    fn merge_propagates_status() {
        let mut outer = CheckReport::new("outer");
        let mut inner = CheckReport::new("inner");
        inner.measure("rank", 5usize);
        outer.merge(inner.clone());
        assert!(outer.passed());
        assert_eq!(outer.measurements["inner.rank"], 5);
        inner.fail(Witness::new("nope", Vec::new()));
        outer.merge(inner);
        assert_eq!(outer.witness.unwrap().description, "inner: nope");
    }
}
