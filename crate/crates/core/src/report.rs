//! Command reports: a fixed JSON layout printed with 17 significant digits,
//! and a plain-text rendering of the same content.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

use crate::kropina::Check;

/// JSON number for finite values, a string for `inf`/`nan`.
pub fn num(x: f64) -> Value {
    match Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None if x.is_nan() => Value::String("nan".into()),
        None if x > 0.0 => Value::String("inf".into()),
        None => Value::String("-inf".into()),
    }
}

pub fn vector(v: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(v.into_iter().map(num).collect())
}

pub fn matrix(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| vector(m.row(i).iter().cloned())).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub instance: Value,
    pub config: Value,
    pub checks: Vec<Check>,
    pub verdict: String,
    pub sigma: Option<f64>,
    pub details: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, instance: Value, config: Value) -> Self {
        Self {
            command: command.into(),
            instance,
            config,
            checks: Vec::new(),
            verdict: String::new(),
            sigma: None,
            details: Map::new(),
            diagnostics: Map::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.into(), value);
    }

    pub fn diagnostic(&mut self, key: &str, value: Value) {
        self.diagnostics.insert(key.into(), value);
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("instance".into(), self.instance.clone());
        m.insert("config".into(), self.config.clone());
        let checks = self
            .checks
            .iter()
            .map(|c| {
                let mut o = Map::new();
                o.insert("name".into(), Value::String(c.name.clone()));
                o.insert("pass".into(), Value::Bool(c.pass));
                o.insert("value".into(), num(c.value));
                o.insert("tolerance".into(), num(c.tolerance));
                Value::Object(o)
            })
            .collect();
        m.insert("checks".into(), Value::Array(checks));
        m.insert("verdict".into(), Value::String(self.verdict.clone()));
        if let Some(s) = self.sigma {
            m.insert("sigma".into(), num(s));
        }
        m.insert("details".into(), Value::Object(self.details.clone()));
        m.insert("diagnostics".into(), Value::Object(self.diagnostics.clone()));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_json(&mut out, &self.to_value(), 0);
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "instance: {}", compact(&self.instance));
        let _ = writeln!(out, "verdict: {}", self.verdict);
        if let Some(s) = self.sigma {
            let _ = writeln!(out, "sigma: {}", fmt_num(s));
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for c in &self.checks {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "  [{tag}] {}: {} (tolerance {})", c.name, fmt_num(c.value), fmt_num(c.tolerance));
            }
        }
        for (title, map) in [("details", &self.details), ("diagnostics", &self.diagnostics)] {
            if !map.is_empty() {
                let _ = writeln!(out, "{title}:");
                for (k, v) in map {
                    match v {
                        Value::Array(lines) if k == "table" => {
                            let _ = writeln!(out, "  {k}:");
                            for l in lines {
                                let _ = writeln!(out, "    {}", l.as_str().unwrap_or_default());
                            }
                        }
                        _ => {
                            let _ = writeln!(out, "  {k}: {}", compact(v));
                        }
                    }
                }
            }
        }
        out
    }
}

fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else {
        format!("{x}")
    }
}

fn compact(v: &Value) -> String {
    let mut out = String::new();
    write_compact(&mut out, v);
    out
}

fn write_number(out: &mut String, n: &Number) {
    if n.is_f64() {
        out.push_str(&fmt_num(n.as_f64().expect("f64 number")));
    } else {
        let _ = write!(out, "{n}");
    }
}

fn write_compact(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) => write_number(out, n),
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_compact(out, x);
            }
            out.push(']');
        }
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{}: ", Value::String(k.clone()));
                write_compact(out, x);
            }
            out.push('}');
        }
        other => {
            let _ = write!(out, "{other}");
        }
    }
}

fn is_flat_array(a: &[Value]) -> bool {
    a.iter().all(|x| !matches!(x, Value::Array(_) | Value::Object(_)))
}

/// Pretty JSON with two-space indentation; arrays of scalars stay on one
/// line.
fn write_json(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) if is_flat_array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_json(out, x, indent);
            }
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(out, x, indent + 1);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                let _ = write!(out, "{}: ", Value::String(k.clone()));
                write_json(out, x, indent + 1);
                if i + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Number(n) => write_number(out, n),
        other => {
            let _ = write!(out, "{other}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers_keep_seventeen_digits() {
        let mut r = Report::new("ricci", json!({"builtin": "so_n"}), json!({"tol": 1e-8}));
        r.sigma = Some(0.25);
        r.checks.push(Check::below("einstein", 1e-17, 1e-8));
        r.detail("dim", json!(3));
        r.detail("inf", num(f64::INFINITY));
        let text = r.to_json();
        assert!(text.contains("\"sigma\": 2.5000000000000000e-1"));
        assert!(text.contains("\"dim\": 3"));
        assert!(text.contains("\"inf\": \"inf\""));
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["sigma"].as_f64(), Some(0.25));
        assert_eq!(parsed["checks"][0]["pass"], json!(true));
    }

    #[test]
    fn round_trip_is_lossless() {
        let x = 0.1 + 0.2;
        let mut r = Report::new("c", Value::Null, Value::Null);
        r.detail("x", num(x));
        let parsed: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(parsed["details"]["x"].as_f64(), Some(x));
    }
}
