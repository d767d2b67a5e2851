//! Verification outcomes shared by every harness.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// First counterexample, always concrete.
    Fail { witness: Witness },
    /// A precondition did not hold.
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Coefficient {
        exponent: String,
        expected: String,
        actual: String,
    },
    Residual {
        value: f64,
        tolerance: f64,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Coefficient {
                exponent,
                expected,
                actual,
            } => write!(f, "at {exponent}: expected {expected}, got {actual}"),
            Witness::Residual { value, tolerance } => {
                write!(f, "residual {value:.3e} exceeds {tolerance:.1e}")
            }
        }
    }
}

/// What a harness checked and how it came out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub parameters: BTreeMap<String, String>,
    /// Verified coefficient range or residual description.
    pub coverage: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(flatten)]
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>) -> Self {
        VerificationReport {
            identity: identity.into(),
            parameters: BTreeMap::new(),
            coverage: String::new(),
            residual: None,
            status: Status::Pass,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn coverage(mut self, c: impl Into<String>) -> Self {
        self.coverage = c.into();
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn fail_at(mut self, exponent: impl ToString, expected: impl ToString, actual: impl ToString) -> Self {
        self.status = Status::Fail {
            witness: Witness::Coefficient {
                exponent: exponent.to_string(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            },
        };
        self
    }

    /// Records a residual and passes or fails it against `tolerance`.
    pub fn with_residual(mut self, value: f64, tolerance: f64) -> Self {
        self.residual = Some(value);
        self.coverage = format!("residual {value:.3e} (tolerance {tolerance:.1e})");
        self.status = if value.is_finite() && value < tolerance {
            Status::Pass
        } else {
            Status::Fail {
                witness: Witness::Residual { value, tolerance },
            }
        };
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped {
            reason: reason.into(),
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Fail { .. })
    }

    fn params_string(&self) -> String {
        self.parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub const CSV_HEADER: &'static str = "identity,parameters,status,coverage,residual,witness";

    pub fn csv_row(&self) -> String {
        let (status, witness) = match &self.status {
            Status::Pass => ("pass", String::new()),
            Status::Fail { witness } => ("fail", witness.to_string()),
            Status::Skipped { reason } => ("skipped", reason.clone()),
        };
        let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
        format!(
            "{},{},{},{},{},{}",
            quote(&self.identity),
            quote(&self.params_string()),
            status,
            quote(&self.coverage),
            self.residual.map(|r| format!("{r:e}")).unwrap_or_default(),
            quote(&witness)
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match &self.status {
            Status::Pass => "PASS".to_string(),
            Status::Fail { witness } => format!("FAIL ({witness})"),
            Status::Skipped { reason } => format!("SKIP ({reason})"),
        };
        write!(f, "{tag} {}", self.identity)?;
        let p = self.params_string();
        if !p.is_empty() {
            write!(f, " [{p}]")?;
        }
        if !self.coverage.is_empty() {
            write!(f, " {}", self.coverage)?;
        }
        for n in &self.notes {
            write!(f, "\n    {n}")?;
        }
        Ok(())
    }
}
