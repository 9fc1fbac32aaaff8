//! Rendering of results as a table, JSON, or CSV. Floats carry 17
//! significant digits everywhere so that output round-trips exactly.

use serde_json::{Map, Value};

/// An executed subcommand: echoed inputs plus ordered outputs.
pub struct Report {
    pub subcommand: &'static str,
    pub inputs: Map<String, Value>,
    pub outputs: Vec<(&'static str, Value)>,
}

/// 17 significant digits, enough to reconstruct the exact f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn num(x: f64) -> Value {
    Value::from(x)
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt17(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn to_table(&self) -> String {
        let width = self.outputs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (key, value) in &self.outputs {
            out.push_str(&format!("{key:<width$}  {}\n", value_text(value)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut outputs = Map::new();
        for (key, value) in &self.outputs {
            outputs.insert((*key).to_string(), value.clone());
        }
        let doc = serde_json::json!({
            "subcommand": self.subcommand,
            "inputs": Value::Object(self.inputs.clone()),
            "outputs": Value::Object(outputs),
            "version": env!("CARGO_PKG_VERSION"),
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("serializable report");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let header: Vec<&str> = self.outputs.iter().map(|(k, _)| *k).collect();
        let row: Vec<String> = self.outputs.iter().map(|(_, v)| value_text(v)).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }
}

/// A CSV sheet with a fixed header and full-precision float cells.
pub struct Sheet {
    header: &'static str,
    rows: Vec<String>,
}

impl Sheet {
    pub fn new(header: &'static str) -> Self {
        Sheet {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, cells: &[f64]) {
        let row: Vec<String> = cells.iter().map(|&x| fmt17(x)).collect();
        self.rows.push(row.join(","));
    }

    pub fn push_with_optional(&mut self, cells: &[f64], last: Option<f64>) {
        let mut row: Vec<String> = cells.iter().map(|&x| fmt17(x)).collect();
        row.push(last.map(fmt17).unwrap_or_default());
        self.rows.push(row.join(","));
    }

    pub fn finish(self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 32 + 32);
        out.push_str(self.header);
        out.push('\n');
        for row in self.rows {
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}
