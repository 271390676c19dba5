//! Report envelope and the decimal-string encoding of numbers.

use std::fmt::Display;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

pub fn num<T: Display>(x: T) -> Value {
    Value::String(x.to_string())
}

pub fn vec_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(num).collect())
}

pub fn vecs_value<V: AsRef<[BigInt]>>(vs: &[V]) -> Value {
    Value::Array(vs.iter().map(|v| vec_value(v.as_ref())).collect())
}

pub fn u64s_value(v: &[u64]) -> Value {
    Value::Array(v.iter().map(num).collect())
}

/// Independent re-checks attached to a report.
#[derive(Debug, Default)]
pub struct Checks {
    items: Vec<(String, bool)>,
}

impl Checks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, passed: bool) {
        self.items.push((name.into(), passed));
    }

    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }

    fn to_value(&self) -> Value {
        let checks: Vec<Value> = self
            .items
            .iter()
            .map(|(name, ok)| json!({"name": name, "passed": ok}))
            .collect();
        json!({"passed": self.all_passed(), "checks": checks})
    }
}

#[derive(Debug)]
pub struct Report {
    /// `None` when the command computes something without asserting a
    /// property.
    pub property: Option<bool>,
    pub result: Value,
    pub checks: Checks,
    pub applicable: bool,
}

impl Report {
    pub fn new(property: Option<bool>, result: Value, checks: Checks) -> Self {
        Self {
            property,
            result,
            checks,
            applicable: true,
        }
    }

    /// The hypothesis of the checked statement fails for this input.
    pub fn not_applicable(result: Value, checks: Checks) -> Self {
        Self {
            property: None,
            result,
            checks,
            applicable: false,
        }
    }

    pub fn status(&self) -> &'static str {
        if !self.checks.all_passed() {
            "verification_failed"
        } else if self.property == Some(false) {
            "violated"
        } else if !self.applicable {
            "not_applicable"
        } else {
            "verified"
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status() {
            "verified" | "not_applicable" => EXIT_OK,
            _ => EXIT_VIOLATED,
        }
    }

    pub fn envelope(&self, command: &str) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(command));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("status".into(), json!(self.status()));
        m.insert("result".into(), self.result.clone());
        m.insert("verification".into(), self.checks.to_value());
        Value::Object(m)
    }
}

pub fn error_envelope(command: &str, err: &CliError) -> Value {
    let mut e = Map::new();
    e.insert("message".into(), json!(err.to_string()));
    if let CliError::Json { line, column, .. } = err {
        e.insert("line".into(), num(line));
        e.insert("column".into(), num(column));
    }
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("status".into(), json!("invalid"));
    m.insert("error".into(), Value::Object(e));
    Value::Object(m)
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
