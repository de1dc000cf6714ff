//! Deterministic JSON and CSV writers. Floats carry 17 significant digits;
//! non-finite values become `null` in JSON and `nan`/`inf` in CSV.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// `{:.16e}`, the 17-significant-digit form used everywhere.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serialize with sorted keys, two-space indentation and fixed float format.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::InvalidParameter(format!("serialization: {e}")))?;
    let mut s = String::new();
    write_value(&mut s, &v, 0);
    s.push('\n');
    Ok(s)
}

fn write_value(s: &mut String, v: &Value, depth: usize) {
    let pad = |s: &mut String, d: usize| s.push_str(&"  ".repeat(d));
    match v {
        Value::Null => s.push_str("null"),
        Value::Bool(b) => s.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().unwrap();
                if x.is_finite() {
                    s.push_str(&fmt_f64(x));
                } else {
                    s.push_str("null");
                }
            } else {
                let _ = write!(s, "{n}");
            }
        }
        Value::String(t) => s.push_str(&Value::String(t.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                s.push_str("[]");
                return;
            }
            // Scalar arrays stay on one line.
            if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                s.push('[');
                for (k, x) in items.iter().enumerate() {
                    if k > 0 {
                        s.push_str(", ");
                    }
                    write_value(s, x, depth);
                }
                s.push(']');
                return;
            }
            s.push_str("[\n");
            for (k, x) in items.iter().enumerate() {
                pad(s, depth + 1);
                write_value(s, x, depth + 1);
                s.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(s, depth);
            s.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                s.push_str("{}");
                return;
            }
            s.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                pad(s, depth + 1);
                s.push_str(&Value::String(key.clone()).to_string());
                s.push_str(": ");
                write_value(s, x, depth + 1);
                s.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(s, depth);
            s.push('}');
        }
    }
}

/// CSV text from a header and rows of floats.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_f64).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Long-format series CSV `tau,quantity,value`.
pub fn series_csv(series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let mut s = String::from("tau,quantity,value\n");
    for (name, pts) in series {
        for (t, v) in pts {
            let _ = writeln!(s, "{},{name},{}", fmt_f64(*t), fmt_f64(*v));
        }
    }
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits_and_nan_is_null() {
        let v = serde_json::json!({"b": 0.1, "a": [1.0, 2], "c": "x"});
        let s = to_json(&v).unwrap();
        assert!(s.contains("\"b\": 1.0000000000000001e-1"));
        assert!(s.contains("[1.0000000000000000e0, 2]"));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        let parsed: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["b"].as_f64(), Some(0.1));

        #[derive(Serialize)]
        struct W {
            x: f64,
        }
        let s = to_json(&W { x: f64::NAN }).unwrap();
        assert!(s.contains("\"x\": null"));
    }

    #[test]
    fn csv_round_trips() {
        let text = csv(&["a", "b"], vec![vec![0.1, -2.5]]);
        let line = text.lines().nth(1).unwrap();
        let back: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(back, vec![0.1, -2.5]);
    }
}
