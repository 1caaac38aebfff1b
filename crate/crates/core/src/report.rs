use std::fmt;

use serde::Serialize;
use serde_json::Value;

/// One violated rule together with the data that exhibits the violation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub rule: String,
    /// Where inside a composite instance the rule failed; empty at top level.
    pub location: String,
    pub witness: Value,
}

/// Outcome of a law check. An empty report means every rule held.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Report {
    findings: Vec<Finding>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rule: &str, witness: Value) {
        self.findings.push(Finding {
            rule: rule.to_string(),
            location: String::new(),
            witness,
        });
    }

    /// Appends the findings of a sub-check, prefixing their locations.
    pub fn absorb(&mut self, location: &str, other: Report) {
        for mut f in other.findings {
            f.location = if f.location.is_empty() {
                location.to_string()
            } else {
                format!("{location}.{}", f.location)
            };
            self.findings.push(f);
        }
    }

    pub fn is_ok(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn into_findings(self) -> Vec<Finding> {
        self.findings
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.findings.iter().any(|f| f.rule == rule)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        write!(f, "{} finding(s)", self.findings.len())?;
        for finding in &self.findings {
            write!(f, "; {}", finding.rule)?;
            if !finding.location.is_empty() {
                write!(f, " at {}", finding.location)?;
            }
        }
        Ok(())
    }
}
