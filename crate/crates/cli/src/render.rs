//! Plain-text rendering: one `path: value` line per scalar of the JSON form.

use serde::Serialize;
use serde_json::Value;

fn walk(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                walk(&p, x, out);
            }
        }
        Value::Array(xs) if !xs.is_empty() && xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                walk(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

pub fn text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut out = String::new();
    walk("", &v, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flattens_nested_values() {
        let v = serde_json::json!({"a": 1, "b": {"c": "x", "d": [1, 2]}, "e": [{"f": null}]});
        assert_eq!(text(&v), "a: 1\nb.c: x\nb.d: [1,2]\ne[0].f: null\n");
    }
}
