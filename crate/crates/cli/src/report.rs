use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use strat_core::{Error, Result};

/// How a command ended, before it is turned into an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Budget,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Budget => 3,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Budget => "budget-exceeded",
        }
    }
}

/// What a command produced: a verdict, a JSON payload, the plain-text
/// rendering and, where the object has one, a DOT rendering.
pub struct Outcome {
    pub verdict: Verdict,
    pub payload: Value,
    pub text: Vec<String>,
    pub dot: Option<String>,
}

impl Outcome {
    pub fn new(verdict: Verdict, payload: Value, text: Vec<String>) -> Self {
        Outcome {
            verdict,
            payload,
            text,
            dot: None,
        }
    }

    pub fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

/// A file read by a command, kept with its digest for the report.
pub struct Input {
    pub path: String,
    pub text: String,
    pub sha256: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        let sha256 = hex::encode(Sha256::digest(&bytes));
        let text = String::from_utf8(bytes).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Ok(Input {
            path: path.display().to_string(),
            text,
            sha256,
        })
    }

    pub fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_str(&self.text).map_err(|e| Error::InvalidInput(format!("{}: {e}", self.path)))
    }
}

pub fn report(command: &[String], inputs: &[Input], outcome: &Outcome) -> Value {
    json!({
        "command": command,
        "inputs": inputs.iter().map(|i| json!({ "path": i.path, "sha256": i.sha256 })).collect::<Vec<_>>(),
        "verdict": outcome.verdict.as_str(),
        "result": outcome.payload,
    })
}

pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}
