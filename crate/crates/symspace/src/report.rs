//! Versioned, deterministic check reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use symspace_core::check::AxiomReport;
use symspace_core::module::ModuleReport;
use symspace_core::quandle::{QuandleReport, QuandleViolation};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: u32,
    pub tool: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<CheckEntry>,
    pub data: BTreeMap<String, Value>,
    pub timing_ms: u64,
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut s = String::from("sha256:");
    for b in hash {
        write!(s, "{b:02x}").expect("string write");
    }
    s
}

impl Report {
    pub fn new(command: &str, input: Option<&[u8]>, seed: u64) -> Self {
        Report {
            version: REPORT_VERSION,
            tool: format!("symspace {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            input_digest: input.map(digest),
            seed,
            status: Status::Pass,
            checks: Vec::new(),
            data: BTreeMap::new(),
            timing_ms: 0,
        }
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, None, None, None);
    }

    /// A failing check carries a witness; `Value::Null` is replaced by an empty list.
    pub fn fail(&mut self, name: impl Into<String>, witness: Value) {
        let w = if witness.is_null() {
            json!([])
        } else {
            witness
        };
        self.push(name, Some(w), None, None);
    }

    pub fn flag(&mut self, name: impl Into<String>, ok: bool, witness: Value) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, witness);
        }
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.checks.push(CheckEntry {
            name: name.into(),
            status: Status::Skipped,
            witness: None,
            exhaustive: None,
            note: Some(reason.into()),
        });
    }

    fn push(
        &mut self,
        name: impl Into<String>,
        witness: Option<Value>,
        exhaustive: Option<bool>,
        note: Option<String>,
    ) {
        let status = if witness.is_some() {
            Status::Fail
        } else {
            Status::Pass
        };
        self.checks.push(CheckEntry {
            name: name.into(),
            status,
            witness,
            exhaustive,
            note,
        });
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    /// Append an axiom report, prefixing names with `prefix` when non-empty.
    pub fn axioms(&mut self, prefix: &str, r: &AxiomReport) {
        for c in &r.checks {
            let name = if prefix.is_empty() {
                c.name.to_string()
            } else {
                format!("{prefix}.{}", c.name)
            };
            let witness = c.witness.as_ref().map(|w| json!(w));
            self.push(name, witness, Some(c.exhaustive), c.note.clone());
        }
    }

    pub fn quandle(&mut self, prefix: &str, r: &QuandleReport, rack_only: bool) {
        let find = |axiom: &str| r.violations.iter().find(|v| v.axiom() == axiom);
        let name = |a: &str| {
            if prefix.is_empty() {
                a.to_string()
            } else {
                format!("{prefix}.{a}")
            }
        };
        let witness = |v: &QuandleViolation| match *v {
            QuandleViolation::NotLeftInvertible { x, y1, y2 } => {
                json!({"x": x, "y1": y1, "y2": y2})
            }
            QuandleViolation::NotSelfDistributive { x, y, z } => json!({"x": x, "y": y, "z": z}),
            QuandleViolation::NotIdempotent { x } => json!({"x": x}),
        };
        self.push(
            name("left_invertibility"),
            find("left_invertibility").map(witness),
            Some(true),
            None,
        );
        let sd_note = (!r.exhaustive).then(|| format!("{} sampled triples", r.triples_checked));
        self.push(
            name("self_distributivity"),
            find("self_distributivity").map(witness),
            Some(r.exhaustive),
            sd_note,
        );
        if rack_only {
            self.skip(name("idempotence"), "rack: idempotence not required");
        } else {
            self.push(
                name("idempotence"),
                find("idempotence").map(witness),
                Some(true),
                None,
            );
        }
    }

    pub fn module(&mut self, prefix: &str, r: &ModuleReport) {
        use symspace_core::module::ModuleAxiom::*;
        for axiom in [EtaEta, EtaTau, TauSum, Diagonal, EtaInvertible] {
            let name = if prefix.is_empty() {
                axiom.name().to_string()
            } else {
                format!("{prefix}.{}", axiom.name())
            };
            let w = r
                .violations
                .iter()
                .find(|v| v.axiom == axiom)
                .map(|v| match v.z {
                    Some(z) => json!({"x": v.x, "y": v.y, "z": z}),
                    None => json!({"x": v.x, "y": v.y}),
                });
            self.push(name, w, Some(true), None);
        }
    }

    /// Sort checks, fix the overall status. Under `strict`, skipped checks fail the run.
    pub fn finish(&mut self, strict: bool, timing_ms: u64) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        let failed = self
            .checks
            .iter()
            .any(|c| c.status == Status::Fail || (strict && c.status == Status::Skipped));
        self.status = if failed { Status::Fail } else { Status::Pass };
        self.timing_ms = timing_ms;
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let status = |st: Status| match st {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        writeln!(s, "{} {}: {}", self.tool, self.command, status(self.status)).unwrap();
        if let Some(d) = &self.input_digest {
            writeln!(s, "input {d}").unwrap();
        }
        for c in &self.checks {
            write!(s, "  {:<4} {}", status(c.status), c.name).unwrap();
            if let Some(w) = &c.witness {
                write!(s, "  witness {w}").unwrap();
            }
            if c.exhaustive == Some(false) {
                write!(s, "  (sampled)").unwrap();
            }
            if let Some(n) = &c.note {
                write!(s, "  [{n}]").unwrap();
            }
            s.push('\n');
        }
        for (k, v) in &self.data {
            let shown = v.to_string();
            if shown.len() <= 72 {
                writeln!(s, "  {k}: {shown}").unwrap();
            } else {
                writeln!(s, "  {k}: <{} bytes of JSON>", shown.len()).unwrap();
            }
        }
        s
    }
}
