//! The report emitted for every command, in machine and human form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub code: String,
    pub message: String,
    /// Method values attached to an inconsistency.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<(String, String)>,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        let values = match e {
            Error::Inconsistency { values, .. } => values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            _ => Vec::new(),
        };
        ErrorReport {
            code: e.code().to_string(),
            message: e.to_string(),
            values,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    /// The job as read, in file format.
    pub job: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    pub elapsed_us: u64,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::parse("report", e.to_string()))
    }

    /// Plain-text summary of the same content.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let group = &self.job["group"];
        let _ = writeln!(
            out,
            "strata-kit {} | {} | {}_{} | {:.3} ms",
            self.version,
            self.command,
            group["kind"].as_str().unwrap_or("?"),
            group["n"],
            self.elapsed_us as f64 / 1000.0
        );
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error [{}]: {}", e.code, e.message);
            for (k, v) in &e.values {
                let _ = writeln!(out, "  {k}: {v}");
            }
        }
        if let Some(r) = &self.result {
            write_value(&mut out, r, 0);
        }
        out
    }
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items
                .iter()
                .map(|x| match x {
                    Value::Object(_) => None,
                    other => inline(other),
                })
                .collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match inline(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match inline(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", inline(other).unwrap_or_default());
        }
    }
}
