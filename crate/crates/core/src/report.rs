//! Structured verdicts shared by every verifier.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The input did not meet the check's precondition.
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Reject => "reject",
        })
    }
}

/// Concrete evidence for a failed condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub message: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Witness {
    pub fn new(message: impl Into<String>, detail: Value) -> Self {
        Witness { message: message.into(), detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub verdict: Verdict,
    pub stages: Vec<Stage>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            verdict: Verdict::Pass,
            stages: Vec::new(),
            data: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// A report whose precondition failed.
    pub fn rejected(title: impl Into<String>, reason: Witness) -> Self {
        let mut r = Report::new(title);
        r.verdict = Verdict::Reject;
        r.stages.push(Stage { name: "precondition".into(), verdict: Verdict::Reject, witness: Some(reason) });
        r
    }

    pub fn pass_stage(&mut self, name: impl Into<String>) {
        self.stages.push(Stage { name: name.into(), verdict: Verdict::Pass, witness: None });
    }

    pub fn fail_stage(&mut self, name: impl Into<String>, witness: Witness) {
        self.stages.push(Stage { name: name.into(), verdict: Verdict::Fail, witness: Some(witness) });
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
        }
    }

    /// Records a stage from an optional failure witness.
    pub fn stage(&mut self, name: impl Into<String>, failure: Option<Witness>) {
        match failure {
            None => self.pass_stage(name),
            Some(w) => self.fail_stage(name, w),
        }
    }

    /// Appends the stages of a sub-report under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: &Report) {
        for s in &other.stages {
            let name = format!("{prefix}: {}", s.name);
            match s.verdict {
                Verdict::Pass => self.pass_stage(name),
                Verdict::Fail => self.fail_stage(name, s.witness.clone().expect("failed stage carries a witness")),
                Verdict::Reject => {
                    self.stages.push(Stage { name, verdict: Verdict::Reject, witness: s.witness.clone() });
                    if self.verdict == Verdict::Pass {
                        self.verdict = Verdict::Reject;
                    }
                }
            }
        }
    }

    pub fn with_data(mut self, key: &str, value: Value) -> Self {
        self.data.insert(key.to_string(), value);
        self
    }

    pub fn set_data(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn first_failure(&self) -> Option<&Stage> {
        self.stages.iter().find(|s| s.verdict != Verdict::Pass)
    }

    pub fn stage_named(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Human-readable rendering.
    pub fn to_markdown(&self) -> String {
        let mut out = format!("## {} — {}\n\n", self.title, self.verdict);
        for s in &self.stages {
            out.push_str(&format!("- [{}] {}", s.verdict, s.name));
            if let Some(w) = &s.witness {
                out.push_str(&format!(": {}", w.message));
                if !w.detail.is_null() {
                    out.push_str(&format!(" `{}`", w.detail));
                }
            }
            out.push('\n');
        }
        if !self.data.is_empty() {
            out.push('\n');
            for (k, v) in &self.data {
                out.push_str(&format!("- **{k}**: `{v}`\n"));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("\n> {n}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fail_sticks_and_carries_witness() {
        let mut r = Report::new("t");
        r.pass_stage("a");
        r.fail_stage("b", Witness::new("broken", Value::Null));
        r.pass_stage("c");
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.first_failure().unwrap().name, "b");
        let json = r.to_json();
        let back: Report = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
        assert!(r.to_markdown().contains("[fail] b: broken"));
    }
}
