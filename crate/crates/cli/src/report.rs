//! Machine-readable reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Verdicts describe the input; a failing verdict is a finding, not an error.
    Analysis,
    /// Verdicts are properties that must hold; any failure is a violation.
    Verification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub mode: Mode,
    pub seed: Option<u64>,
    pub caps: String,
    pub verdicts: Vec<Verdict>,
    pub structures: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<Value>,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: impl Into<String>, mode: Mode, caps: &elliskit_core::Caps) -> Self {
        Report {
            command: command.into(),
            mode,
            seed: None,
            caps: caps.to_string(),
            verdicts: Vec::new(),
            structures: BTreeMap::new(),
            counterexamples: Vec::new(),
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, witness: Option<Value>) -> bool {
        self.verdicts.push(Verdict { name: name.into(), pass, witness });
        pass
    }

    pub fn record(&mut self, key: impl Into<String>, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report structures serialize");
        self.structures.insert(key.into(), v);
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn failures(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.pass).count()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn finish(&mut self, started: Instant) {
        self.timing.elapsed_ms = started.elapsed().as_secs_f64() * 1000.0;
    }

    /// 0 for clean runs and pure analysis, 1 for a violated property.
    pub fn exit_code(&self) -> i32 {
        match self.mode {
            Mode::Verification if !self.all_passed() => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The JSON form with timing zeroed; equal inputs, seed and caps give equal strings.
    pub fn stable_json(&self) -> String {
        let mut r = self.clone();
        r.timing.elapsed_ms = 0.0;
        r.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({:?})", self.command, self.mode);
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed {s}");
        }
        for v in &self.verdicts {
            let tag = if v.pass { "PASS" } else { "FAIL" };
            match &v.witness {
                Some(w) => {
                    let _ = writeln!(out, "  {tag} {}: {}", v.name, compact(w));
                }
                None => {
                    let _ = writeln!(out, "  {tag} {}", v.name);
                }
            }
        }
        for (k, v) in &self.structures {
            let _ = writeln!(out, "  {k} = {}", compact(v));
        }
        for c in &self.counterexamples {
            let _ = writeln!(out, "  counterexample {}", compact(c));
        }
        let _ = writeln!(out, "{} checks, {} failed, {:.1} ms", self.verdicts.len(), self.failures(), self.timing.elapsed_ms);
        out
    }
}

fn compact(v: &Value) -> String {
    const LIMIT: usize = 400;
    let s = v.to_string();
    if s.chars().count() > LIMIT {
        let cut: String = s.chars().take(LIMIT).collect();
        format!("{cut}...")
    } else {
        s
    }
}
