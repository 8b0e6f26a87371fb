//! JSON certificates emitted by every verifier.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    /// Passed, but the checked congruence is trivially true (e.g. modulus `q - 1 = 1`).
    #[serde(rename = "PASS-VACUOUS")]
    PassVacuous,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIP")]
    Skip,
}

impl Status {
    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::PassVacuous => "PASS-VACUOUS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub witness: Option<Value>,
    pub counts: BTreeMap<String, Value>,
    pub millis: u64,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report {
            check: check.to_string(),
            params: BTreeMap::new(),
            status: Status::Pass,
            witness: None,
            counts: BTreeMap::new(),
            millis: 0,
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn count(&mut self, key: &str, v: impl Into<Value>) {
        self.counts.insert(key.to_string(), v.into());
    }

    pub fn fail(&mut self, witness: Value) {
        self.status = Status::Fail;
        self.witness = Some(witness);
    }

    pub fn skip(&mut self, reason: &str) {
        self.status = Status::Skip;
        self.witness = Some(Value::String(reason.to_string()));
    }

    /// Turns resource errors into `SKIP` and anything else into `FAIL`.
    pub fn absorb_error(&mut self, e: &Error) {
        match e {
            Error::Resource(msg) => self.skip(msg),
            other => self.fail(Value::String(other.to_string())),
        }
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.millis = start.elapsed().as_millis() as u64;
        self
    }

    /// The report with the timing field zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Report {
        Report { millis: 0, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn summary_line(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{} [{}] {} ({} ms)", self.check, params.join(", "), self.status, self.millis)
    }
}
