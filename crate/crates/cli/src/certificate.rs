use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "ch2noid";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Self-contained record of one run: echoed input, every check, and the result.
#[derive(Debug, Serialize)]
pub struct Certificate {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub backing: &'static str,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub checks: Vec<Check>,
    pub result: Value,
    pub status: String,
}

impl Certificate {
    pub fn new(command: &'static str, input: Value, backing: &'static str) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command,
            input,
            seed: None,
            backing,
            tolerances: BTreeMap::new(),
            checks: Vec::new(),
            result: Value::Null,
            status: String::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
