use std::fmt::Display;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub expected: String,
    pub obtained: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub results: Value,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, inputs: &[&[u8]]) -> Report {
        let mut h = Sha256::new();
        for chunk in inputs {
            h.update((chunk.len() as u64).to_le_bytes());
            h.update(chunk);
        }
        Report {
            command: command.to_string(),
            inputs_digest: hex::encode(h.finalize()),
            verdicts: Vec::new(),
            results: Value::Null,
            pass: true,
        }
    }

    /// Records a comparison of an expected value against the computed one.
    pub fn expect<E: Display, O: Display>(&mut self, check: &str, expected: E, obtained: O, pass: bool) {
        self.pass &= pass;
        self.verdicts.push(Verdict {
            check: check.to_string(),
            expected: expected.to_string(),
            obtained: obtained.to_string(),
            pass,
        });
    }

    pub fn expect_eq<T: PartialEq + Display>(&mut self, check: &str, expected: T, obtained: T) {
        let pass = expected == obtained;
        self.expect(check, expected, obtained, pass);
    }

    pub fn print(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(self).expect("report serialises"));
            return;
        }
        for v in &self.verdicts {
            let tag = if v.pass { "PASS" } else { "FAIL" };
            if v.pass {
                println!("{tag}  {}: {}", v.check, v.obtained);
            } else {
                println!("{tag}  {}: expected {}, got {}", v.check, v.expected, v.obtained);
            }
        }
        if !self.verdicts.is_empty() {
            let failed = self.verdicts.iter().filter(|v| !v.pass).count();
            println!("{}: {} checks, {failed} failed", self.command, self.verdicts.len());
        }
    }
}

pub fn list<T: Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}
