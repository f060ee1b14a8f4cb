//! Report rendering. JSON goes through the exact-float writer; CSV and text
//! flatten the same value into one `path,value` row per leaf.

use imslab::config::OutputFormat;
use imslab::output::to_json;
use serde_json::Value;

pub fn render(report: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = to_json(report);
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in flatten(report) {
                s.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
            }
            s
        }
        OutputFormat::Text => flatten(report)
            .into_iter()
            .map(|(k, v)| format!("{k}: {v}\n"))
            .collect(),
    }
}

fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(x, join(k), out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                walk(x, join(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push((path, s.clone())),
        Value::Null => out.push((path, String::new())),
        other => out.push((path, other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattening() {
        let v = json!({"a": {"b": [1, 2.5]}, "c": "x,y", "d": null});
        assert_eq!(
            render(&v, OutputFormat::Csv),
            "key,value\na.b.0,1\na.b.1,2.5\nc,\"x,y\"\nd,\n"
        );
        assert_eq!(render(&v, OutputFormat::Text), "a.b.0: 1\na.b.1: 2.5\nc: x,y\nd: \n");
        assert!(render(&v, OutputFormat::Json).starts_with("{\n  \"a\""));
    }
}
