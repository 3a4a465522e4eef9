#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

pub fn mcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcover"))
        .args(args)
        .output()
        .expect("spawn mcover")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

/// Runs a command that must succeed and returns its stdout.
pub fn ok(args: &[&str]) -> String {
    let out = mcover(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    stdout(&out)
}

/// `(header, rows)` of a CSV document with plain cells.
pub fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().expect("header").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

/// Single-row CSV as a field lookup.
pub fn field(text: &str, name: &str) -> String {
    let (header, rows) = csv(text);
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows[0][i].clone()
}

pub fn num(text: &str, name: &str) -> f64 {
    field(text, name)
        .parse()
        .unwrap_or_else(|_| panic!("{name} is not a number"))
}

pub fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

pub fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/output.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Validates `value` against the subset of JSON Schema used by the shipped
/// schema: `$ref` into `$defs`, `oneOf`, `type`, `const`, `enum`,
/// `required`, `properties`, `additionalProperties: false`, `items`,
/// `minItems`, `maxItems` and `minimum`.
pub fn validate(value: &Value, schema: &Value) -> Result<(), String> {
    check(value, schema, schema, "$")
}

fn type_matches(value: &Value, ty: &str) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "number" => value.is_number(),
        "integer" => value.is_i64() || value.is_u64(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        other => panic!("unsupported type {other}"),
    }
}

fn check(value: &Value, schema: &Value, root: &Value, at: &str) -> Result<(), String> {
    let s = schema
        .as_object()
        .ok_or_else(|| format!("{at}: schema is not an object"))?;
    for key in s.keys() {
        let known = [
            "$schema",
            "$id",
            "title",
            "description",
            "$defs",
            "$ref",
            "oneOf",
            "type",
            "const",
            "enum",
            "required",
            "properties",
            "additionalProperties",
            "items",
            "minItems",
            "maxItems",
            "minimum",
        ];
        assert!(known.contains(&key.as_str()), "validator does not support {key}");
    }
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").expect("local ref");
        check(value, &root["$defs"][name], root, at)?;
    }
    if let Some(options) = s.get("oneOf").and_then(Value::as_array) {
        let passing = options.iter().filter(|o| check(value, o, root, at).is_ok()).count();
        if passing != 1 {
            return Err(format!("{at}: matches {passing} of the oneOf branches"));
        }
    }
    if let Some(ty) = s.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(value, t),
            Value::Array(ts) => ts.iter().any(|t| type_matches(value, t.as_str().unwrap())),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            return Err(format!("{at}: expected type {ty}, got {value}"));
        }
    }
    if let Some(c) = s.get("const") {
        if value != c {
            return Err(format!("{at}: expected {c}, got {value}"));
        }
    }
    if let Some(e) = s.get("enum").and_then(Value::as_array) {
        if !e.contains(value) {
            return Err(format!("{at}: {value} not in {e:?}"));
        }
    }
    if let Some(min) = s.get("minimum").and_then(Value::as_f64) {
        if value.as_f64().is_some_and(|v| v < min) {
            return Err(format!("{at}: {value} below {min}"));
        }
    }
    if let Some(obj) = value.as_object() {
        if let Some(req) = s.get("required").and_then(Value::as_array) {
            for k in req {
                if !obj.contains_key(k.as_str().unwrap()) {
                    return Err(format!("{at}: missing {k}"));
                }
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (k, v) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => check(v, sub, root, &format!("{at}.{k}"))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{at}: unexpected property {k}"));
                }
                None => {}
            }
        }
    }
    if let Some(arr) = value.as_array() {
        if let Some(n) = s.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < n {
                return Err(format!("{at}: fewer than {n} items"));
            }
        }
        if let Some(n) = s.get("maxItems").and_then(Value::as_u64) {
            if (arr.len() as u64) > n {
                return Err(format!("{at}: more than {n} items"));
            }
        }
        if let Some(items) = s.get("items") {
            for (i, v) in arr.iter().enumerate() {
                check(v, items, root, &format!("{at}[{i}]"))?;
            }
        }
    }
    Ok(())
}
