use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// The output of one command: an echo of the invocation, digests of the
/// files read, and the results in both text and JSON form.
#[derive(Debug, Default)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    /// `(path, sha256)` for each input file, in the order read.
    pub inputs: Vec<(String, String)>,
    /// Labelled sections of the text report.
    pub sections: Vec<(String, String)>,
    pub result: Map<String, Value>,
    pub elapsed: Option<Duration>,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            args: Report::echo_args(),
            ..Report::default()
        }
    }

    /// The invocation minus `--timing`, so that the echo is stable.
    fn echo_args() -> Vec<String> {
        std::env::args().skip(1).filter(|a| a != "--timing").collect()
    }

    pub fn input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.push((path.to_string(), digest(bytes)));
    }

    /// A one-line `label: value` entry; multi-line values are indented below the label.
    pub fn line(&mut self, label: &str, value: impl ToString) {
        self.sections.push((label.to_string(), value.to_string()));
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.result.insert(key.to_string(), value.into());
    }

    pub fn to_text(&self) -> String {
        let args: Vec<String> = self.args.iter().map(|a| quote(a)).collect();
        let mut out = format!("command: causal {}\n", args.join(" "));
        for (path, sha) in &self.inputs {
            out.push_str(&format!("input: {path} sha256={sha}\n"));
        }
        for (label, value) in &self.sections {
            if value.contains('\n') {
                out.push_str(&format!("{label}:\n"));
                for l in value.lines() {
                    out.push_str(&format!("  {l}\n"));
                }
            } else {
                out.push_str(&format!("{label}: {value}\n"));
            }
        }
        if let Some(t) = self.elapsed {
            out.push_str(&format!("timing: {:.3} ms\n", t.as_secs_f64() * 1e3));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|(path, sha)| json!({ "path": path, "sha256": sha }))
            .collect();
        let mut top = json!({
            "command": self.command,
            "args": self.args,
            "inputs": inputs,
            "result": Value::Object(self.result.clone()),
        });
        if let Some(t) = self.elapsed {
            top["timing_ms"] = json!(t.as_secs_f64() * 1e3);
        }
        let mut text = serde_json::to_string_pretty(&top).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Single-quotes an argument that a shell would split or expand.
fn quote(arg: &str) -> String {
    let plain = !arg.is_empty()
        && arg.chars().all(|c| c.is_ascii_alphanumeric() || "-_./=@:,+".contains(c));
    if plain {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', "'\\''"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_sorted() {
        let mut r = Report {
            command: "models".into(),
            ..Report::default()
        };
        r.set("zeta", 1);
        r.set("alpha", 2);
        let text = r.to_json();
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"args\"").unwrap() < text.find("\"result\"").unwrap());
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("models"), "models");
        assert_eq!(quote("p |- []q"), "'p |- []q'");
        assert_eq!(quote("it's"), "'it'\\''s'");
    }

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(digest(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
