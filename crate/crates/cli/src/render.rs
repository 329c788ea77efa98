//! Plain-text rendering: a headline, then one `path: value` line per JSON leaf.

use serde_json::Value;

fn walk(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                walk(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{prefix}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                walk(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn text(headline: &str, report: &Value) -> String {
    let mut out = format!("{headline}\n");
    if let Some(v) = report.get("verdict") {
        out.push_str(&format!("verdict: {}\n", scalar(v)));
    }
    let mut rest = report.clone();
    if let Value::Object(map) = &mut rest {
        map.remove("verdict");
    }
    walk("", &rest, &mut out);
    out
}
