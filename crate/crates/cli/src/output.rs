use serde_json::{Map, Value};
use std::fmt::Write;

/// A command result that can be rendered either way.
pub struct Emit {
    pub csv: String,
    pub json: Value,
}

/// Non-finite floats become strings so that JSON keeps them.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

/// Shortest round-trip form; exponent notation for very small or large values.
pub fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A header plus rows of numbers; JSON is a list of objects.
pub fn table(header: &[&str], rows: &[Vec<f64>]) -> Emit {
    let mut csv = header.join(",");
    csv.push('\n');
    let mut list = Vec::with_capacity(rows.len());
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| cell(x)).collect();
        writeln!(csv, "{}", cells.join(",")).unwrap();
        let obj: Map<String, Value> = header
            .iter()
            .zip(row)
            .map(|(h, &x)| (h.to_string(), num(x)))
            .collect();
        list.push(Value::Object(obj));
    }
    Emit {
        csv,
        json: Value::Array(list),
    }
}

/// One flat record: CSV header of keys and a single row of values.
pub fn record(fields: Vec<(&str, Value)>) -> Emit {
    let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
    let values: Vec<String> = fields
        .iter()
        .map(|(_, v)| match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        })
        .map(|s| {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s
            }
        })
        .collect();
    let csv = format!("{}\n{}\n", header.join(","), values.join(","));
    let json = Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
    Emit { csv, json }
}
