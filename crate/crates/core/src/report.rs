//! Structured outcomes of theorem checks.

use serde::{Deserialize, Serialize};

use crate::linalg::{spectral_norm, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            threshold,
            pass: residual <= threshold,
        }
    }

    /// A boolean check with no meaningful residual.
    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            residual: if pass { 0.0 } else { 1.0 },
            threshold: 0.0,
            pass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    /// Some hypothesis did not hold; the conclusion says nothing.
    Inconclusive,
    /// Hypotheses held and the conclusion failed every re-check.
    CounterExample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    /// Expected class `(m, n)`, `n = 0` meaning the non-quasi class.
    pub expected: Option<(u32, u32)>,
    pub residual: f64,
    pub pass: bool,
    pub parts: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDigest {
    pub dims: Vec<usize>,
    pub norms: Vec<f64>,
}

impl InstanceDigest {
    pub fn of(matrices: &[&ComplexMatrix]) -> Self {
        Self {
            dims: matrices.iter().map(|m| m.rows()).collect(),
            norms: matrices.iter().map(|m| spectral_norm(m)).collect(),
        }
    }
}

/// How a failing conclusion was re-examined before being reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recheck {
    pub loosened_pass: bool,
    /// `None` when the inputs are not Gaussian-integer matrices.
    pub exact_pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub variant: Option<String>,
    pub hypotheses: Vec<Check>,
    pub conclusion: Conclusion,
    pub outcome: Outcome,
    pub seed: Option<u64>,
    pub instance: InstanceDigest,
    pub recheck: Option<Recheck>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(theorem_id: impl Into<String>, instance: InstanceDigest) -> Self {
        Self {
            theorem_id: theorem_id.into(),
            variant: None,
            hypotheses: Vec::new(),
            conclusion: Conclusion {
                expected: None,
                residual: 0.0,
                pass: true,
                parts: Vec::new(),
            },
            outcome: Outcome::Pass,
            seed: None,
            instance,
            recheck: None,
            notes: Vec::new(),
        }
    }

    pub fn with_variant(mut self, variant: impl Into<String>) -> Self {
        self.variant = Some(variant.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn expect_class(&mut self, m: u32, n: u32) {
        self.conclusion.expected = Some((m, n));
    }

    pub fn hypothesis(&mut self, check: Check) {
        self.hypotheses.push(check);
    }

    pub fn conclude(&mut self, check: Check) {
        self.conclusion.parts.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.pass)
    }

    /// Computes the aggregate conclusion and the outcome from the recorded checks.
    pub fn finish(mut self) -> Self {
        self.conclusion.pass = self.conclusion.parts.iter().all(|c| c.pass);
        self.conclusion.residual = self
            .conclusion
            .parts
            .iter()
            .map(|c| c.residual)
            .fold(0.0, f64::max);
        self.outcome = if !self.hypotheses_hold() {
            Outcome::Inconclusive
        } else if self.conclusion.pass {
            Outcome::Pass
        } else {
            Outcome::CounterExample
        };
        self
    }

    /// Applies a re-check verdict to a report whose conclusion failed.
    pub fn apply_recheck(mut self, recheck: Recheck) -> Self {
        if self.outcome == Outcome::CounterExample {
            let rescued = match recheck.exact_pass {
                Some(exact) => exact,
                None => recheck.loosened_pass,
            };
            if rescued {
                self.outcome = Outcome::Pass;
                self.note("conclusion passed on re-check");
            }
        }
        self.recheck = Some(recheck);
        self
    }
}
