use std::collections::BTreeMap;

use lhslab::decomp::Verdict;
use lhslab::exactlin::Matrix;
use lhslab::lhs::ClassStatus;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::TOOL_VERSION;

pub const SCHEMA: &str = "report-v1";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Machine-readable result of one command. Every map is key-sorted, so the rendered
/// bytes depend only on the inputs and the configuration.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub inputs: BTreeMap<String, String>,
    pub field: String,
    pub tables: BTreeMap<String, Value>,
    pub statuses: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, Verdict>,
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: &str, config: Value, field: String) -> Self {
        Report {
            command: command.into(),
            config,
            inputs: BTreeMap::new(),
            field,
            tables: BTreeMap::new(),
            statuses: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            timings: None,
        }
    }

    pub fn config_hash(&self) -> String {
        sha256_hex(
            json!({"command": self.command, "config": self.config})
                .to_string()
                .as_bytes(),
        )
    }

    pub fn verdict(&mut self, name: impl Into<String>, v: Verdict) {
        let name = name.into();
        let merged = match self.verdicts.remove(&name) {
            Some(prev) => prev.and(v),
            None => v,
        };
        self.verdicts.insert(name, merged);
    }

    /// 1 if any verdict failed, else 4 if a hypothesis failed, else 0.
    pub fn exit_code(&self) -> i32 {
        let all = self.verdicts.values();
        if all.clone().any(|v| matches!(v, Verdict::Fail(_))) {
            1
        } else if all.into_iter().any(|v| matches!(v, Verdict::Hypothesis(_))) {
            4
        } else {
            0
        }
    }

    pub fn to_value(&self) -> Value {
        let verdicts: BTreeMap<&String, Value> = self
            .verdicts
            .iter()
            .map(|(k, v)| (k, verdict_json(v)))
            .collect();
        let mut v = json!({
            "schema": SCHEMA,
            "toolVersion": TOOL_VERSION,
            "command": self.command,
            "config": self.config,
            "configHash": self.config_hash(),
            "inputs": self.inputs,
            "field": self.field,
            "tables": self.tables,
            "statuses": self.statuses,
            "verdicts": verdicts,
            "exitCode": self.exit_code(),
        });
        if let Some(t) = &self.timings {
            v["timings"] = json!(t);
        }
        v
    }

    pub fn render(&self) -> String {
        render_value(&self.to_value())
    }
}

pub fn render_value(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Pass => json!({"status": "PASS"}),
        Verdict::Fail(m) => json!({"status": "FAIL", "detail": m}),
        Verdict::Hypothesis(m) => json!({"status": "HYPOTHESIS", "detail": m}),
    }
}

pub fn status_name(s: ClassStatus) -> String {
    match s {
        ClassStatus::Zero => "Zero".into(),
        ClassStatus::Nonzero => "Nonzero".into(),
        ClassStatus::UndefinedBelow(k) => format!("UndefinedBelow({k})"),
    }
}

/// Column vector as a list of decimal strings.
pub fn coords(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::String(m.get(i, 0).to_string()))
            .collect(),
    )
}
