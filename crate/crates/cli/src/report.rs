//! Report document helpers: 17-significant-digit numbers and the
//! aligned-column text rendering.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};
use wherald_core::C64;

/// A float written with 17 significant digits, or `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // normalise -0 so identical physics gives identical bytes
    let x = if x == 0.0 { 0.0 } else { x };
    let text = format!("{x:.16e}");
    Value::Number(text.parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn complex(z: C64) -> Value {
    obj([("re", num(z.re)), ("im", num(z.im))])
}

pub fn obj<const N: usize>(entries: [(&str, Value); N]) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

/// Serialized report document, terminated by a newline.
pub fn to_machine(report: &Value) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

/// Aligned `key  value` lines; arrays of flat objects become tables.
pub fn to_text(report: &Value) -> String {
    let mut scalars = Vec::new();
    let mut tables = Vec::new();
    flatten("", report, &mut scalars, &mut tables);
    let width = scalars.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in &scalars {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    for (name, rows) in &tables {
        out.push('\n');
        let _ = writeln!(out, "[{name}]");
        render_table(rows, &mut out);
    }
    out
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.values().all(|x| !x.is_object() && !x.is_array() || is_short_array(x)),
        _ => false,
    }
}

fn is_short_array(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()))
}

type Table = Vec<Vec<(String, String)>>;

fn flatten(prefix: &str, v: &Value, scalars: &mut Vec<(String, String)>, tables: &mut Vec<(String, Table)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, scalars, tables);
            }
        }
        Value::Array(items) if !items.is_empty() && items.iter().all(is_flat) => {
            let rows = items
                .iter()
                .map(|item| {
                    let Value::Object(m) = item else { unreachable!() };
                    m.iter().map(|(k, x)| (k.clone(), scalar_text(x))).collect()
                })
                .collect();
            tables.push((prefix.to_string(), rows));
        }
        Value::String(s) if s.contains('\n') => {
            for (i, line) in s.lines().enumerate() {
                scalars.push((format!("{prefix}[{i}]"), line.to_string()));
            }
        }
        other => scalars.push((prefix.to_string(), scalar_text(other))),
    }
}

fn render_table(rows: &Table, out: &mut String) {
    let headers: Vec<&str> = rows[0].iter().map(|(k, _)| k.as_str()).collect();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, (_, v)) in row.iter().enumerate() {
            if let Some(w) = widths.get_mut(i) {
                *w = (*w).max(v.len());
            }
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{}", line(headers.clone()));
    for row in rows {
        let _ = writeln!(out, "{}", line(row.iter().map(|(_, v)| v.as_str()).collect()));
    }
}
