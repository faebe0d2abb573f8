use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

/// One named check performed by a command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
        }
    }

    /// `value ≤ limit`, with both numbers in the detail.
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self::new(name, value <= limit, format!("{value:e} <= {limit:e}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Json(Value),
    Table {
        columns: Vec<&'static str>,
        rows: Vec<Vec<f64>>,
        /// Extra `# key=value` lines written after the config.
        notes: Vec<(String, String)>,
    },
}

/// What a command produced, before rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: Body,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn failures(&self) -> Vec<&Assertion> {
        self.assertions.iter().filter(|a| !a.passed).collect()
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "none".to_owned(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(config: &RunConfig, report: &Report) -> Result<String, CliError> {
    let config_value = serde_json::to_value(config).map_err(|e| CliError::Io(e.to_string()))?;
    match (config.format, &report.body) {
        (Format::Json, body) => {
            let result = match body {
                Body::Json(v) => v.clone(),
                Body::Table {
                    columns,
                    rows,
                    notes,
                } => json!({
                    "columns": columns,
                    "rows": rows,
                    "notes": notes.iter().map(|(k, v)| json!({k: v})).collect::<Vec<_>>(),
                }),
            };
            let doc = json!({
                "command": config.command.name(),
                "config": config_value,
                "assertions": report.assertions,
                "result": result,
            });
            let mut text =
                serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        (
            Format::Csv,
            Body::Table {
                columns,
                rows,
                notes,
            },
        ) => {
            let mut out = format!("# clockshift {}\n", config.command.name());
            if let Value::Object(map) = &config_value {
                for (k, v) in map {
                    out.push_str(&format!("# {k}={}\n", scalar_text(v)));
                }
            }
            for (k, v) in notes {
                out.push_str(&format!("# {k}={v}\n"));
            }
            for a in &report.assertions {
                let status = if a.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("# assert {}={status} ({})\n", a.name, a.detail));
            }
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(columns)
                .map_err(|e| CliError::Io(e.to_string()))?;
            for row in rows {
                writer
                    .write_record(row.iter().map(|x| x.to_string()))
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| CliError::Io(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
            Ok(out)
        }
        (Format::Csv, Body::Json(_)) => Err(CliError::Usage(format!(
            "{} produces JSON only",
            config.command.name()
        ))),
    }
}
