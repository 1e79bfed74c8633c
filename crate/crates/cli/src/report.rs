//! Uniform report envelope and its text, JSON and CSV renderings.

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub values: Value,
    pub tolerances: Value,
    pub verdict: bool,
    pub version: String,
    /// Header and rows for `--csv`.
    #[serde(skip)]
    pub table: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, values: Value, tolerances: Value, verdict: bool) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            values,
            tolerances,
            verdict,
            version: polylt::VERSION.to_string(),
            table: Vec::new(),
        }
    }

    pub fn with_table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = std::iter::once(header.iter().map(|h| h.to_string()).collect())
            .chain(rows)
            .collect();
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.table.is_empty() {
            w.write_record(["key", "value"])?;
            let mut rows = Vec::new();
            flatten("", &self.values, &mut rows);
            for (k, v) in rows {
                w.write_record([k, v])?;
            }
        } else {
            for row in &self.table {
                w.write_record(row)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut rows = Vec::new();
        flatten("", &self.values, &mut rows);
        let mut out = format!("{} (polylt {})\n", self.command, self.version);
        for (k, v) in rows {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        out.push_str(&format!("verdict: {}\n", if self.verdict { "pass" } else { "FAIL" }));
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Flattens nested objects to dotted keys; arrays of scalars are joined.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten(&key(k), inner, out);
            }
        }
        Value::Array(items) => {
            let scalars: Option<Vec<String>> = items.iter().map(scalar).collect();
            match scalars {
                Some(s) => out.push((prefix.to_string(), format!("[{}]", s.join(", ")))),
                None => {
                    for (i, inner) in items.iter().enumerate() {
                        flatten(&key(&i.to_string()), inner, out);
                    }
                }
            }
        }
        other => out.push((prefix.to_string(), scalar(other).unwrap_or_default())),
    }
}

/// Error envelope printed before exiting with status 2.
pub fn error_json(message: &str) -> String {
    serde_json::to_string_pretty(&json!({ "error": message, "version": polylt::VERSION }))
        .expect("error serializes")
}
