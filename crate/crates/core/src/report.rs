//! Machine-readable verification outcomes shared by the checkers and the CLI.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// A labelled input rendered in the scene text format, so it can be pasted
/// back into a scene file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

impl NamedValue {
    pub fn new(name: impl Into<String>, value: impl Into<String>) -> Self {
        NamedValue {
            name: name.into(),
            value: value.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: usize,
    /// Which identity failed within the suite.
    pub check: String,
    pub inputs: Vec<NamedValue>,
    pub defect: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub structure: String,
    pub variant: String,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(
        suite: impl Into<String>,
        structure: impl Into<String>,
        variant: impl Into<String>,
        trials: usize,
        seed: u64,
        violations: Vec<Violation>,
    ) -> Self {
        VerificationReport {
            suite: suite.into(),
            structure: structure.into(),
            variant: variant.into(),
            trials,
            seed,
            passed: violations.is_empty(),
            violations,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let status = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "[{status}] {} on {} ({}): {} trials, seed {}, {} violation(s)",
            self.suite,
            self.structure,
            self.variant,
            self.trials,
            self.seed,
            self.violations.len()
        );
        for note in &self.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        for v in &self.violations {
            let _ = writeln!(out, "  trial {} [{}]", v.trial, v.check);
            for input in &v.inputs {
                let _ = writeln!(out, "    {} = {}", input.name, input.value);
            }
            let _ = writeln!(out, "    defect = {}", v.defect);
        }
        out
    }
}
