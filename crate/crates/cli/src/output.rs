//! Byte-stable rendering: every float is printed in scientific notation with
//! 17 significant digits, LF line endings throughout.

use entangle_ring::format_float;
use serde::Serialize;
use serde_json::Value;

/// Compact JSON in field order, floats rendered by [`format_float`];
/// integers stay integers.
pub fn json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable output");
    let mut out = String::new();
    write_value(&v, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().expect("f64")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(x, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, x)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push(':');
                write_value(x, out);
            }
            out.push('}');
        }
    }
}

/// Two-column `name,value` CSV with a header row.
pub fn csv_pairs(rows: &[(String, f64)]) -> String {
    let mut s = String::from("name,value\n");
    for (k, v) in rows {
        s.push_str(k);
        s.push(',');
        s.push_str(&format_float(*v));
        s.push('\n');
    }
    s
}

/// Left-aligned `name  value` table.
pub fn table_pairs(rows: &[(String, f64)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        s.push_str(&format!("{k:<width$}  {}\n", format_float(*v)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_fixed_scientific_format() {
        let s = json(&serde_json::json!({"x": 0.375, "n": 4, "v": [1.0, -2.5], "ok": true}));
        assert_eq!(
            s,
            "{\"x\":3.7500000000000000e-1,\"n\":4,\"v\":[1.0000000000000000e0,-2.5000000000000000e0],\"ok\":true}\n"
        );
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.375));
    }

    #[test]
    fn csv_and_table() {
        let rows = vec![("a".to_string(), 1.0), ("bb".to_string(), 0.5)];
        assert_eq!(
            csv_pairs(&rows),
            "name,value\na,1.0000000000000000e0\nbb,5.0000000000000000e-1\n"
        );
        assert_eq!(
            table_pairs(&rows),
            "a   1.0000000000000000e0\nbb  5.0000000000000000e-1\n"
        );
    }
}
