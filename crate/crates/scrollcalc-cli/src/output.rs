//! Report envelope and rendering.

use crate::scenario::SCHEMA_VERSION;
use scrollcalc::QuantifierDomain;
use serde_json::{json, Map, Value};

pub fn document(command: &str, description: Option<&str>, domain: QuantifierDomain, result: Value) -> Value {
    let mut result = result;
    annotate_intervals(&mut result, "result");
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "scenario": description,
        "quantifier_domain": domain.label(),
        "result": result,
    })
}

fn is_interval(m: &Map<String, Value>) -> bool {
    m.len() == 2 && m.get("lo").is_some_and(Value::is_i64) && m.get("hi").is_some_and(Value::is_i64)
}

/// Gives every {lo, hi} object a reason field: null when exact, otherwise the
/// quantity that stayed undecided.
fn annotate_intervals(v: &mut Value, key: &str) {
    match v {
        Value::Object(m) => {
            if is_interval(m) {
                let exact = m["lo"] == m["hi"];
                let reason = if exact {
                    Value::Null
                } else {
                    Value::String(format!("{key}: curve data bound but do not determine this value"))
                };
                m.insert("reason".into(), reason);
                return;
            }
            for (k, x) in m.iter_mut() {
                annotate_intervals(x, k);
            }
        }
        Value::Array(a) => {
            for x in a {
                annotate_intervals(x, key);
            }
        }
        _ => {}
    }
}

pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, "", &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(m) if m.contains_key("lo") && m.contains_key("hi") => {
            let (lo, hi) = (&m["lo"], &m["hi"]);
            Some(if lo == hi { lo.to_string() } else { format!("[{lo}, {hi}]") })
        }
        _ => None,
    }
}

fn write_text(v: &Value, prefix: &str, out: &mut String) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{prefix} = {s}\n"));
        return;
    }
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                write_text(x, &join(k), out);
            }
        }
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str(&format!("{prefix} = []\n"));
            }
            for (i, x) in a.iter().enumerate() {
                write_text(x, &join(&i.to_string()), out);
            }
        }
        _ => unreachable!(),
    }
}
