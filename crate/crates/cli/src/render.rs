//! Plain-text rendering of JSON reports: one `key: value` line per field,
//! nested objects indented, multi-line strings printed verbatim.

use serde_json::Value;

pub(crate) fn text(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) || xs.is_empty() => Some(serde_json::to_string(v).unwrap()),
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            // A report that carries a prerendered matrix prints it instead of the raw entries.
            let prerendered = m.get("text").is_some_and(Value::is_string);
            for (k, x) in m {
                if prerendered && k == "matrix" {
                    continue;
                }
                match (scalar(x), x) {
                    (Some(s), _) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    (None, Value::String(s)) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    (None, _) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
