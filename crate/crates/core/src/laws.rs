//! Outcomes of individual law checks.

use serde::{Deserialize, Serialize};

/// One law evaluated on one subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawOutcome {
    pub law: String,
    pub subject: String,
    pub holds: bool,
    /// Both sides of a failing equation, rendered.
    pub counterexample: Option<String>,
}

impl LawOutcome {
    pub fn pass(law: &str, subject: impl Into<String>) -> Self {
        LawOutcome {
            law: law.to_string(),
            subject: subject.into(),
            holds: true,
            counterexample: None,
        }
    }

    pub fn fail(law: &str, subject: impl Into<String>, counterexample: impl Into<String>) -> Self {
        LawOutcome {
            law: law.to_string(),
            subject: subject.into(),
            holds: false,
            counterexample: Some(counterexample.into()),
        }
    }

    /// Compares two sides of an equation.
    pub fn equation<T: PartialEq + std::fmt::Display>(law: &str, subject: impl Into<String>, lhs: &T, rhs: &T) -> Self {
        if lhs == rhs {
            Self::pass(law, subject)
        } else {
            Self::fail(law, subject, format!("lhs = {lhs}, rhs = {rhs}"))
        }
    }
}

/// True when every outcome holds.
pub fn all_hold(outcomes: &[LawOutcome]) -> bool {
    outcomes.iter().all(|o| o.holds)
}
