//! Solver reports and the node budget shared by the search procedures.

use std::sync::atomic::{AtomicU64, Ordering};

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::rational::{format_rational, to_decimal, Rational};

/// Default limit on expanded search nodes.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Search configuration shared by all solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub budget: u64,
    pub parallel: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            budget: DEFAULT_BUDGET,
            parallel: true,
        }
    }
}

impl Config {
    pub fn deterministic() -> Self {
        Config {
            parallel: false,
            ..Config::default()
        }
    }
}

/// Thread-safe node counter.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    /// Charges `n` nodes; fails once the total exceeds the limit.
    pub fn charge(&self, n: u64, depth: usize) -> Result<(), Error> {
        let total = self.used.fetch_add(n, Ordering::Relaxed) + n;
        if total > self.limit {
            Err(Error::Budget {
                limit: self.limit,
                depth,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

/// The value carried by a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReportValue {
    Exact(Rational),
    Interval(Rational, Rational),
    Answer(bool),
    None,
}

/// Uniform solver output, serialized as JSON by the CLI.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretReport {
    pub mode: String,
    pub value: ReportValue,
    pub horizon: Option<usize>,
    pub witness: Option<Value>,
    pub nodes: u64,
    /// Mode-specific fields appended after the standard ones.
    pub extra: Map<String, Value>,
}

impl RegretReport {
    pub fn new(mode: &str, value: ReportValue) -> Self {
        RegretReport {
            mode: mode.to_string(),
            value,
            horizon: None,
            witness: None,
            nodes: 0,
            extra: Map::new(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match &self.value {
            ReportValue::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("mode".into(), json!(self.mode));
        match &self.value {
            ReportValue::Exact(r) => {
                map.insert("value".into(), json!(format_rational(r)));
                map.insert("decimal".into(), json!(to_decimal(r, 6)));
            }
            ReportValue::Interval(lo, hi) => {
                map.insert("value".into(), json!([format_rational(lo), format_rational(hi)]));
                map.insert(
                    "decimal".into(),
                    json!(format!("[{}, {}]", to_decimal(lo, 6), to_decimal(hi, 6))),
                );
            }
            ReportValue::Answer(b) => {
                map.insert("answer".into(), json!(b));
            }
            ReportValue::None => {
                map.insert("value".into(), Value::Null);
            }
        }
        map.insert("horizon".into(), self.horizon.map_or(Value::Null, |h| json!(h)));
        map.insert("witness".into(), self.witness.clone().unwrap_or(Value::Null));
        map.insert("nodes".into(), json!(self.nodes));
        for (k, v) in &self.extra {
            map.insert(k.clone(), v.clone());
        }
        Value::Object(map)
    }
}
