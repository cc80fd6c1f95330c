//! Report structure emitted by every experiment.
//!
//! A report is a pure function of its configuration (seed included): no
//! timestamps, no environment state, and all maps are sorted, so identical
//! invocations produce byte-identical JSON. The shape is pinned by
//! `schema/report.schema.json`.

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Configuration echo: every knob that influenced the run.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub experiment: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycles: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_history: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    pub k: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub format: String,
}

impl ConfigEcho {
    pub fn new(experiment: &str, k: f64, temperature: f64, format: &str) -> Self {
        ConfigEcho {
            experiment: experiment.to_string(),
            steps: None,
            cycles: None,
            seed: None,
            mode: None,
            max_history: None,
            tol: None,
            trajectory: None,
            reference: None,
            k,
            temperature,
            format: format.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub machine: Option<Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn new(config: ConfigEcho) -> Self {
        Report {
            experiment: config.experiment.clone(),
            config,
            analytic: None,
            empirical: None,
            ledger: None,
            machine: None,
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// An analytic quantity: exact rational rendering when available, always a
/// float in bits.
pub fn value_pair(exact: Option<String>, bits: f64) -> Value {
    json!({ "exact": exact, "bits": bits })
}
