//! Outcome of a verification run.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::sequence::Sequence;

pub const STATUS_PASS: &str = "pass";
pub const STATUS_FAIL: &str = "fail";
pub const STATUS_NO_HITS: &str = "no qualifying S found";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub orbits_scanned: u64,
    pub counterexamples: Vec<Sequence>,
    pub elapsed_ms: u64,
    pub status: String,
    #[serde(default)]
    pub counts: BTreeMap<String, u64>,
    #[serde(default)]
    pub details: BTreeMap<String, Value>,
    /// Invocation that produced the report, filled in by the front end.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<Value>,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report {
            check: check.to_string(),
            params: BTreeMap::new(),
            orbits_scanned: 0,
            counterexamples: Vec::new(),
            elapsed_ms: 0,
            status: STATUS_PASS.to_string(),
            counts: BTreeMap::new(),
            details: BTreeMap::new(),
            config: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn bump(&mut self, key: &str, by: u64) {
        *self.counts.entry(key.to_string()).or_default() += by;
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    pub fn counterexample(&mut self, s: Sequence) {
        self.counterexamples.push(s);
        self.status = STATUS_FAIL.to_string();
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.status != STATUS_FAIL
    }

    /// Sets `elapsed_ms` from a start instant and finalizes the status.
    pub fn finish(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        if !self.counterexamples.is_empty() {
            self.status = STATUS_FAIL.to_string();
        }
        self
    }

    /// JSON with the timing field zeroed, for byte-level comparisons.
    pub fn to_canonical_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        serde_json::to_string(&r).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}
