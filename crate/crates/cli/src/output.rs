use serde::Serialize;
use serde_json::{json, Value};

/// What a command produced: structured results plus the same values laid out
/// for a terminal.
pub struct Report {
    pub inputs: Value,
    pub results: Value,
    pub human: String,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(inputs: impl Serialize, results: impl Serialize, human: String) -> Self {
        Report {
            inputs: serde_json::to_value(inputs).expect("inputs serialize"),
            results: serde_json::to_value(results).expect("results serialize"),
            human,
            warnings: Vec::new(),
        }
    }

    pub fn warn(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }

    pub fn envelope(&self, command: &str) -> Value {
        json!({
            "command": command,
            "inputs": self.inputs,
            "results": self.results,
            "warnings": self.warnings,
        })
    }
}

pub fn error_envelope(command: &str, message: &str, exit_code: i32) -> Value {
    json!({
        "command": command,
        "error": message,
        "exit_code": exit_code,
    })
}

/// Aligned `key  value` lines.
#[derive(Default)]
pub struct Lines {
    rows: Vec<(String, String)>,
}

impl Lines {
    pub fn row(&mut self, key: impl Into<String>, value: impl std::fmt::Display) -> &mut Self {
        self.rows.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        self.rows
            .iter()
            .map(|(k, v)| format!("{k:<width$}  {v}\n"))
            .collect()
    }
}
