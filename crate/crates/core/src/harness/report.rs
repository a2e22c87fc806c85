use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::ExperimentConfig;
use crate::povm::Regime;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialCounts {
    pub trials: u64,
    pub psi1: u64,
    pub psi2: u64,
    pub resampled_pairs: u64,
    pub misclassified_qnd: u64,
}

/// Aggregated result of a Monte Carlo run.
///
/// `detectors` holds the rate at which each detector fires given that the
/// data is the state it announces; `detectors_joint` holds the plain
/// per-trial click rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub success_rate: f64,
    pub inconclusive_rate: f64,
    pub wrong_rate: f64,
    pub detectors: BTreeMap<String, f64>,
    pub detectors_joint: BTreeMap<String, f64>,
    pub mean_analytic_success: f64,
    pub mean_fidelity: f64,
    pub stderr: BTreeMap<String, f64>,
    pub regime: Regime,
    pub pathway: String,
    pub counts: TrialCounts,
    pub config: ExperimentConfig,
    pub wall_time_s: f64,
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) => {
            for (k, x) in xs.iter().enumerate() {
                flatten(&key(&k.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

impl Report {
    /// Copy with the wall time zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self { wall_time_s: 0.0, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Dotted keys and values in JSON order, e.g. `detectors.C1`.
    pub fn flat_fields(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        flatten("", &serde_json::to_value(self).expect("report serializes"), &mut out);
        out
    }

    /// Header line and one value line.
    pub fn to_csv(&self) -> String {
        sweep_csv(std::slice::from_ref(self))
    }
}

/// Header from the first report, one line per report.
pub fn sweep_csv(reports: &[Report]) -> String {
    let rows: Vec<Vec<(String, String)>> = reports.iter().map(Report::flat_fields).collect();
    let Some(first) = rows.first() else {
        return String::new();
    };
    let quote = |s: &str| if s.contains([',', '"', '\n']) { format!("\"{}\"", s.replace('"', "\"\"")) } else { s.to_string() };
    let mut out = first.iter().map(|(k, _)| quote(k)).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in &rows {
        let index: BTreeMap<&str, &str> = row.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        let line: Vec<String> = first.iter().map(|(k, _)| quote(index.get(k.as_str()).copied().unwrap_or(""))).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
