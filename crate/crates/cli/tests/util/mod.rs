//! Test helpers: binary invocation and a structural validator for the
//! shipped JSON schemas (the subset of draft-07 they actually use: type,
//! required, properties, additionalProperties, items, enum, minimum, and
//! the num/den pattern).

// Shared between test binaries; not every binary uses every helper.
#![allow(dead_code)]

use std::process::{Command, Output};

use serde_json::Value;

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadtwist"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout_of(args: &[&str]) -> String {
    let output = run_cli(args);
    assert!(
        output.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("utf8 output")
}

pub fn load_schema(name: &str) -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/");
    let text = std::fs::read_to_string(format!("{path}{name}"))
        .unwrap_or_else(|e| panic!("schema {name} must ship with the repo: {e}"));
    serde_json::from_str(&text).expect("schema parses")
}

fn matches_num_den_pattern(s: &str) -> bool {
    let rest = s.strip_prefix('-').unwrap_or(s);
    let mut parts = rest.splitn(2, '/');
    let num = parts.next().unwrap_or("");
    let den = parts.next().unwrap_or("");
    !num.is_empty()
        && !den.is_empty()
        && num.bytes().all(|b| b.is_ascii_digit())
        && den.bytes().all(|b| b.is_ascii_digit())
}

fn type_matches(value: &Value, ty: &str) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
        "number" => value.is_number(),
        _ => false,
    }
}

pub fn validate(value: &Value, schema: &Value, path: &str) -> Result<(), String> {
    if let Some(ty) = schema.get("type") {
        let allowed: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(list) => list.iter().filter_map(|v| v.as_str()).collect(),
            _ => vec![],
        };
        if !allowed.iter().any(|t| type_matches(value, t)) {
            return Err(format!("{path}: expected type {allowed:?}, got {value}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            return Err(format!("{path}: {value} not in enum {options:?}"));
        }
    }
    if let Some(minimum) = schema.get("minimum").and_then(Value::as_i64) {
        if let Some(v) = value.as_i64() {
            if v < minimum {
                return Err(format!("{path}: {v} below minimum {minimum}"));
            }
        }
    }
    if let Some(pattern) = schema.get("pattern").and_then(Value::as_str) {
        if let Some(s) = value.as_str() {
            assert_eq!(
                pattern, "^-?[0-9]+/[0-9]+$",
                "validator only knows the num/den pattern"
            );
            if !matches_num_den_pattern(s) {
                return Err(format!("{path}: {s:?} does not match {pattern}"));
            }
        }
    }
    if let Some(object) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !object.contains_key(key) {
                    return Err(format!("{path}: missing required key {key:?}"));
                }
            }
        }
        let properties = schema.get("properties").and_then(Value::as_object);
        if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
            if let Some(props) = properties {
                for key in object.keys() {
                    if !props.contains_key(key) {
                        return Err(format!("{path}: unexpected key {key:?}"));
                    }
                }
            }
        }
        if let Some(props) = properties {
            for (key, sub) in props {
                if let Some(v) = object.get(key) {
                    validate(v, sub, &format!("{path}.{key}"))?;
                }
            }
        }
    }
    if let Some(items) = value.as_array() {
        if let Some(item_schema) = schema.get("items") {
            for (i, item) in items.iter().enumerate() {
                validate(item, item_schema, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}
