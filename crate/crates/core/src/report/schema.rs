//! The shipped report schema and a small validator for the subset of JSON
//! Schema it uses: type, enum, required, properties, additionalProperties,
//! items, minimum/maximum, and `$ref` into `definitions`.

use serde_json::Value;

pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

pub fn shipped_schema() -> Value {
    serde_json::from_str(REPORT_SCHEMA).expect("bundled schema is valid JSON")
}

/// All schema violations in `value`, as `path: message` strings. Empty
/// means the document validates.
pub fn validate_report_value(value: &Value) -> Vec<String> {
    let schema = shipped_schema();
    let mut errors = Vec::new();
    check(value, &schema, &schema, "$", &mut errors);
    errors
}

fn resolve<'a>(schema: &'a Value, root: &'a Value) -> &'a Value {
    if let Some(reference) = schema.get("$ref").and_then(Value::as_str) {
        if let Some(path) = reference.strip_prefix("#/") {
            let mut node = root;
            for part in path.split('/') {
                node = match node.get(part) {
                    Some(n) => n,
                    None => return schema,
                };
            }
            return node;
        }
    }
    schema
}

fn type_name(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                "integer"
            } else {
                "number"
            }
        }
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn type_matches(value: &Value, expected: &str) -> bool {
    match expected {
        "number" => value.is_number(),
        "integer" => value.is_i64() || value.is_u64(),
        other => type_name(value) == other,
    }
}

fn check(value: &Value, schema: &Value, root: &Value, path: &str, errors: &mut Vec<String>) {
    let schema = resolve(schema, root);

    if let Some(types) = schema.get("type") {
        let allowed: Vec<&str> = match types {
            Value::String(s) => vec![s.as_str()],
            Value::Array(list) => list.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        if !allowed.is_empty() && !allowed.iter().any(|t| type_matches(value, t)) {
            errors.push(format!(
                "{path}: expected type {allowed:?}, found {}",
                type_name(value)
            ));
            return;
        }
    }

    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            errors.push(format!("{path}: value {value} not in enum {options:?}"));
        }
    }

    if let Some(min) = schema.get("minimum").and_then(Value::as_f64) {
        if let Some(n) = value.as_f64() {
            if n < min {
                errors.push(format!("{path}: {n} below minimum {min}"));
            }
        }
    }
    if let Some(max) = schema.get("maximum").and_then(Value::as_f64) {
        if let Some(n) = value.as_f64() {
            if n > max {
                errors.push(format!("{path}: {n} above maximum {max}"));
            }
        }
    }

    if let Value::Object(map) = value {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !map.contains_key(key) {
                    errors.push(format!("{path}: missing required key {key:?}"));
                }
            }
        }
        let properties = schema.get("properties").and_then(Value::as_object);
        for (key, child) in map {
            let child_path = format!("{path}.{key}");
            match properties.and_then(|p| p.get(key)) {
                Some(subschema) => check(child, subschema, root, &child_path, errors),
                None => {
                    if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                        errors.push(format!("{path}: unexpected key {key:?}"));
                    } else if let Some(ap) = schema.get("additionalProperties") {
                        if ap.is_object() {
                            check(child, ap, root, &child_path, errors);
                        }
                    }
                }
            }
        }
    }

    if let Value::Array(items) = value {
        if let Some(item_schema) = schema.get("items") {
            for (i, item) in items.iter().enumerate() {
                check(item, item_schema, root, &format!("{path}[{i}]"), errors);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn minimal_valid_report_passes() {
        let doc = json!({
            "schema_version": "1.0.0",
            "created": "1970-01-01T00:00:00Z",
            "language": "xx",
            "config_digest": "abc",
            "points": []
        });
        assert!(validate_report_value(&doc).is_empty());
    }

    #[test]
    fn missing_key_and_bad_enum_are_reported() {
        let doc = json!({
            "schema_version": "1.0.0",
            "created": "1970-01-01T00:00:00Z",
            "language": "xx",
            "points": [{
                "id": "x", "language": "xx", "aspect": "nonsense",
                "question": "?", "dominant": null, "metrics": null,
                "rules": [], "payload": null
            }]
        });
        let errors = validate_report_value(&doc);
        assert!(errors.iter().any(|e| e.contains("config_digest")));
        assert!(errors.iter().any(|e| e.contains("enum")));
    }

    #[test]
    fn unexpected_key_is_reported() {
        let doc = json!({
            "schema_version": "1.0.0",
            "created": "x",
            "language": "xx",
            "config_digest": "abc",
            "points": [],
            "extra": 1
        });
        let errors = validate_report_value(&doc);
        assert!(errors.iter().any(|e| e.contains("extra")));
    }
}
