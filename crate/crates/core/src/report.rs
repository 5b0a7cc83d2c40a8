//! Structured verdicts for predicates and theorem checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Overall outcome. Hypothesis failures and exhausted bounds are distinct from a failed conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisRejected { hypothesis: String },
    BoundExhausted { bound: i64, what: String },
    /// The computation itself failed; not a mathematical verdict.
    Error { message: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::HypothesisRejected { .. } => "hypothesis-rejected",
            Verdict::BoundExhausted { .. } => "bound-exhausted",
            Verdict::Error { .. } => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Numbers and strings recorded alongside a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<i64>),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Text(s) => write!(f, "{s}"),
            Value::List(v) => write!(f, "[{}]", v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")),
        }
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Value {
        Value::Int(i)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Value {
        Value::Int(i as i64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Value {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Value {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Value {
        Value::Text(s)
    }
}

impl From<Vec<i64>> for Value {
    fn from(v: Vec<i64>) -> Value {
        Value::List(v)
    }
}

impl From<Option<i64>> for Value {
    fn from(v: Option<i64>) -> Value {
        match v {
            Some(i) => Value::Int(i),
            None => Value::Text("none".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub predicate: String,
    pub verdict: Verdict,
    pub conditions: Vec<Condition>,
    pub invariants: BTreeMap<String, Value>,
    pub bounds: BTreeMap<String, i64>,
}

impl CertReport {
    pub fn new(predicate: &str) -> CertReport {
        CertReport { predicate: predicate.to_string(), verdict: Verdict::Pass, conditions: Vec::new(), invariants: BTreeMap::new(), bounds: BTreeMap::new() }
    }

    pub fn condition(&mut self, name: &str, holds: bool, witness: Option<String>) -> &mut Self {
        self.conditions.push(Condition { name: name.to_string(), holds, witness });
        self
    }

    pub fn invariant(&mut self, name: &str, v: impl Into<Value>) -> &mut Self {
        self.invariants.insert(name.to_string(), v.into());
        self
    }

    pub fn bound(&mut self, name: &str, b: i64) -> &mut Self {
        self.bounds.insert(name.to_string(), b);
        self
    }

    pub fn holds(&self, name: &str) -> Option<bool> {
        self.conditions.iter().find(|c| c.name == name).map(|c| c.holds)
    }

    /// Sets the verdict to the conjunction of the conditions, unless already a rejection.
    pub fn conclude(mut self) -> CertReport {
        if matches!(self.verdict, Verdict::Pass | Verdict::Fail) {
            self.verdict = if self.conditions.iter().all(|c| c.holds) { Verdict::Pass } else { Verdict::Fail };
        }
        self
    }

    pub fn reject(mut self, hypothesis: impl Into<String>) -> CertReport {
        self.verdict = Verdict::HypothesisRejected { hypothesis: hypothesis.into() };
        self
    }

    pub fn exhausted(mut self, bound: i64, what: impl Into<String>) -> CertReport {
        self.verdict = Verdict::BoundExhausted { bound, what: what.into() };
        self
    }

    pub fn error(mut self, message: impl Into<String>) -> CertReport {
        self.verdict = Verdict::Error { message: message.into() };
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        match self.invariants.get(name) {
            Some(Value::Int(i)) => Some(*i),
            _ => None,
        }
    }

    /// Human-readable rendering.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.predicate, self.verdict.label());
        match &self.verdict {
            Verdict::HypothesisRejected { hypothesis } => {
                let _ = writeln!(s, "  rejected: {hypothesis}");
            }
            Verdict::BoundExhausted { bound, what } => {
                let _ = writeln!(s, "  bound {bound} exhausted: {what}");
            }
            Verdict::Error { message } => {
                let _ = writeln!(s, "  error: {message}");
            }
            _ => {}
        }
        for c in &self.conditions {
            let mark = if c.holds { "ok " } else { "NO " };
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(s, "  [{mark}] {}  ({w})", c.name);
                }
                None => {
                    let _ = writeln!(s, "  [{mark}] {}", c.name);
                }
            }
        }
        for (k, v) in &self.invariants {
            let _ = writeln!(s, "  {k} = {v}");
        }
        for (k, v) in &self.bounds {
            let _ = writeln!(s, "  bound {k} = {v}");
        }
        s
    }
}
