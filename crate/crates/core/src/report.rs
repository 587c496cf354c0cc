//! Report types shared by the theorem checkers.

use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::Tolerance;
use crate::gframe::FrameBounds;

/// Relative slack when comparing an achieved bound with a predicted one.
pub const BOUND_SLACK_REL: f64 = 1e-8;

/// Relative agreement required between a closed-form frame operator and the
/// one computed directly from the constructed family.
pub const FORMULA_REL: f64 = 1e-10;

/// Knobs shared by every checker.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckConfig {
    pub tol: Tolerance,
    /// Number of random vectors for hypotheses checked on samples.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { tol: Tolerance::default(), samples: 500, seed: 0 }
    }
}

impl CheckConfig {
    /// Slack for a bound comparison at magnitude `scale`.
    pub fn bound_slack(&self, scale: f64) -> f64 {
        self.tol.abs + BOUND_SLACK_REL * scale.abs()
    }
}

/// Sum and combination theorems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum TheoremId {
    PerturbLambda,
    T3Equiv,
    T3Corollary,
    T7Scalar,
    T11Positive,
    TightSum,
    IsometrySum,
    LambdaLower,
    TightMn,
}

/// Perturbation-stability results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum StabilityId {
    PropMixed,
    ThmDifference,
    T12Operator,
    FinalCorollary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    ConclusionHolds,
    HypothesisFails,
    ConclusionFails,
}

impl Verdict {
    /// `HypothesisFails` if any hypothesis failed, otherwise whether every
    /// conclusion check passed.
    pub fn decide(hypotheses: &[Check], conclusions: &[Check]) -> Verdict {
        if hypotheses.iter().any(|c| !c.passed) {
            Verdict::HypothesisFails
        } else if conclusions.iter().all(|c| c.passed) {
            Verdict::ConclusionHolds
        } else {
            Verdict::ConclusionFails
        }
    }
}

/// One named predicate with the number it was decided on.
///
/// `measured` and `limit` are the two sides of the comparison; for purely
/// boolean checks they are `1.0`/`0.0` flags.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub limit: f64,
}

impl Check {
    pub fn new(name: &str, passed: bool, measured: f64, limit: f64) -> Self {
        Check { name: String::from(name), passed, measured, limit }
    }

    /// `measured <= limit`.
    pub fn at_most(name: &str, measured: f64, limit: f64) -> Self {
        Self::new(name, measured <= limit, measured, limit)
    }

    /// `measured < limit`.
    pub fn below(name: &str, measured: f64, limit: f64) -> Self {
        Self::new(name, measured < limit, measured, limit)
    }

    /// `measured >= limit`.
    pub fn at_least(name: &str, measured: f64, limit: f64) -> Self {
        Self::new(name, measured >= limit, measured, limit)
    }

    /// `measured > limit`.
    pub fn above(name: &str, measured: f64, limit: f64) -> Self {
        Self::new(name, measured > limit, measured, limit)
    }

    pub fn flag(name: &str, passed: bool) -> Self {
        Self::new(name, passed, if passed { 1.0 } else { 0.0 }, 1.0)
    }
}

/// Outcome of one sum-theorem instance.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub hypothesis_checks: Vec<Check>,
    pub conclusion_checks: Vec<Check>,
    pub predicted_lower: Option<f64>,
    pub predicted_upper: Option<f64>,
    pub achieved: FrameBounds,
    pub verdict: Verdict,
}

impl TheoremReport {
    pub(crate) fn assemble(
        theorem: TheoremId,
        hypothesis_checks: Vec<Check>,
        conclusion_checks: Vec<Check>,
        predicted: (Option<f64>, Option<f64>),
        achieved: FrameBounds,
    ) -> Self {
        let verdict = Verdict::decide(&hypothesis_checks, &conclusion_checks);
        TheoremReport {
            theorem,
            hypothesis_checks,
            conclusion_checks,
            predicted_lower: predicted.0,
            predicted_upper: predicted.1,
            achieved,
            verdict,
        }
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypothesis_checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.hypothesis_checks.iter().chain(&self.conclusion_checks).find(|c| c.name == name)
    }
}

/// Outcome of one stability-theorem instance.
///
/// `claimed_bounds` are the frame bounds as printed with the theorem; they
/// are logged next to `achieved` and never asserted.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PerturbationReport {
    pub theorem: StabilityId,
    pub alphas: Option<(f64, f64)>,
    pub measured_lhs: f64,
    pub allowed_rhs: f64,
    pub claimed_bounds: Option<(f64, f64)>,
    pub achieved: FrameBounds,
    pub hypothesis_checks: Vec<Check>,
    pub conclusion_checks: Vec<Check>,
    pub verdict: Verdict,
    pub bound_discrepancy_note: String,
}

impl PerturbationReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypothesis_checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.hypothesis_checks.iter().chain(&self.conclusion_checks).find(|c| c.name == name)
    }
}
