use std::fmt::Write as _;

use permsub_core::PatternSpec;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL: &str = "permsub";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes: u64,
    pub elapsed_ms: f64,
    /// Node counts of multi-threaded searches depend on scheduling.
    pub parallel: bool,
}

/// What every command prints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub spec: Option<PatternSpec>,
    pub inputs: Value,
    pub result: Value,
    pub stats: Option<Stats>,
}

impl RunReport {
    pub fn new(command: &str, spec: Option<PatternSpec>, inputs: Value, result: Value) -> Self {
        RunReport {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            spec,
            inputs,
            result,
            stats: None,
        }
    }

    pub fn with_stats(mut self, stats: Stats) -> Self {
        self.stats = Some(stats);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Indented `key: value` rendering.
    pub fn to_pretty(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        render(&mut out, "", &value, 0);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| x.is_number()) => Some(
            items
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
        ),
        _ => None,
    }
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{pad}{key:<24} {s}");
        return;
    }
    let inner = if key.is_empty() {
        depth
    } else {
        let _ = writeln!(out, "{pad}{key}");
        depth + 1
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                render(out, k, x, inner);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                render(out, &format!("[{i}]"), x, inner);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trips_and_sorts_keys() {
        let r = RunReport::new(
            "count",
            Some(PatternSpec::additive(3, 2)),
            json!({"perm": "1,2,3", "a": 1}),
            json!({"count": 1}),
        )
        .with_stats(Stats {
            nodes: 3,
            elapsed_ms: 0.5,
            parallel: false,
        });
        let text = r.to_json();
        assert_eq!(serde_json::from_str::<RunReport>(&text).unwrap(), r);
        assert!(text.find("\"a\"").unwrap() < text.find("\"perm\"").unwrap());
        assert!(r.to_pretty().contains("count"));
    }
}
