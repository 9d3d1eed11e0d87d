//! Structured results for property checks and suites.

use serde::Serialize;
use std::fmt::Write as _;

/// One verified assertion: the inputs and both sides rendered exactly.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub inputs: String,
    pub value: String,
    pub expected: String,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        check: impl Into<String>,
        inputs: impl Into<String>,
        value: impl Into<String>,
        expected: impl Into<String>,
        pass: bool,
    ) -> Self {
        CheckRecord {
            check: check.into(),
            inputs: inputs.into(),
            value: value.into(),
            expected: expected.into(),
            pass,
        }
    }

    /// Record for two exactly comparable rendered values.
    pub fn equality(
        check: impl Into<String>,
        inputs: impl Into<String>,
        value: impl std::fmt::Display,
        expected: impl std::fmt::Display,
    ) -> Self {
        let value = value.to_string();
        let expected = expected.to_string();
        let pass = value == expected;
        CheckRecord::new(check, inputs, value, expected, pass)
    }
}

/// Outcome of a named check run: free-form notes plus one record per
/// assertion, including the counterexample when an assertion fails.
#[derive(Debug, Clone)]
pub struct Report {
    pub name: String,
    pub notes: Vec<String>,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), notes: Vec::new(), checks: Vec::new() }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}: {} ({}/{} checks)",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.passed_count(),
            self.checks.len()
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.summary_line());
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {} | {} | value = {} | expected = {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.check,
                c.inputs,
                c.value,
                c.expected
            );
        }
        out
    }

    /// One JSON object per check, schema `{check, inputs, value, expected, pass}`.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let line = serde_json::to_string(c).expect("string fields serialize");
            let _ = writeln!(out, "{line}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_failures() {
        let mut r = Report::new("demo");
        r.push(CheckRecord::equality("eq", "x", 1, 1));
        r.push(CheckRecord::equality("eq", "y", 1, 2));
        assert!(!r.passed());
        assert_eq!(r.summary_line(), "demo: FAIL (1/2 checks)");
    }

    #[test]
    fn json_lines_schema() {
        let mut r = Report::new("demo");
        r.push(CheckRecord::new("c", "i", "v", "e", true));
        assert_eq!(
            r.to_json_lines(),
            "{\"check\":\"c\",\"inputs\":\"i\",\"value\":\"v\",\"expected\":\"e\",\"pass\":true}\n"
        );
    }
}
