//! Uniform entry point over every checker, keyed by theorem name.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::gframe::{Classification, FrameBounds, GFrameFamily};
use crate::hmodule::AdjointableOp;
use crate::report::{CheckConfig, PerturbationReport, StabilityId, TheoremId, TheoremReport, Verdict};
use crate::stability;
use crate::sums::{self, ScalarWeights};

/// Anything a scenario can name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremKind {
    Classify,
    Sum(TheoremId),
    Stability(StabilityId),
}

impl TheoremKind {
    pub const ALL: [TheoremKind; 14] = [
        TheoremKind::Classify,
        TheoremKind::Sum(TheoremId::PerturbLambda),
        TheoremKind::Sum(TheoremId::T3Equiv),
        TheoremKind::Sum(TheoremId::T3Corollary),
        TheoremKind::Sum(TheoremId::T7Scalar),
        TheoremKind::Sum(TheoremId::T11Positive),
        TheoremKind::Sum(TheoremId::TightSum),
        TheoremKind::Sum(TheoremId::IsometrySum),
        TheoremKind::Sum(TheoremId::LambdaLower),
        TheoremKind::Sum(TheoremId::TightMn),
        TheoremKind::Stability(StabilityId::PropMixed),
        TheoremKind::Stability(StabilityId::ThmDifference),
        TheoremKind::Stability(StabilityId::T12Operator),
        TheoremKind::Stability(StabilityId::FinalCorollary),
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremKind::Classify => "CLASSIFY",
            TheoremKind::Sum(id) => match id {
                TheoremId::PerturbLambda => "PERTURB_LAMBDA",
                TheoremId::T3Equiv => "T3_EQUIV",
                TheoremId::T3Corollary => "T3_COROLLARY",
                TheoremId::T7Scalar => "T7_SCALAR",
                TheoremId::T11Positive => "T11_POSITIVE",
                TheoremId::TightSum => "TIGHT_SUM",
                TheoremId::IsometrySum => "ISOMETRY_SUM",
                TheoremId::LambdaLower => "LAMBDA_LOWER",
                TheoremId::TightMn => "TIGHT_MN",
            },
            TheoremKind::Stability(id) => match id {
                StabilityId::PropMixed => "PROP_MIXED",
                StabilityId::ThmDifference => "THM_DIFFERENCE",
                StabilityId::T12Operator => "T12_OPERATOR",
                StabilityId::FinalCorollary => "FINAL_COROLLARY",
            },
        }
    }

    /// Inputs the checker reads besides `psi`.
    pub fn inputs(self) -> &'static str {
        match self {
            TheoremKind::Classify => "psi",
            TheoremKind::Sum(id) => match id {
                TheoremId::PerturbLambda => "psi, lambda",
                TheoremId::T3Equiv => "psi, delta, m, n",
                TheoremId::T3Corollary | TheoremId::TightSum => "psi, delta",
                TheoremId::T7Scalar | TheoremId::T11Positive => "psi, delta, weights",
                TheoremId::IsometrySum => "psi, delta, lambda",
                TheoremId::LambdaLower => "psi, delta, m, n, lambda_bound",
                TheoremId::TightMn => "psi, delta, m, n",
            },
            TheoremKind::Stability(id) => match id {
                StabilityId::PropMixed | StabilityId::ThmDifference => "psi, delta, weights, alpha1, alpha2",
                StabilityId::T12Operator => "psi, delta_ops (or delta, lifted to its Gram operators)",
                StabilityId::FinalCorollary => "psi, delta, alpha",
            },
        }
    }
}

impl fmt::Display for TheoremKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremKind::ALL.into_iter().find(|k| k.name() == s).ok_or(Error::Invalid("unknown theorem id"))
    }
}

/// Inputs for one checker call. Only the fields the theorem reads need to be
/// present.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub psi: GFrameFamily,
    pub delta: Option<GFrameFamily>,
    pub m: Option<AdjointableOp>,
    pub n: Option<AdjointableOp>,
    pub lambda: Option<AdjointableOp>,
    pub weights: Option<ScalarWeights>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub alpha: Option<f64>,
    pub lambda_bound: Option<f64>,
    pub delta_ops: Option<Vec<AdjointableOp>>,
}

impl Instance {
    pub fn new(psi: GFrameFamily) -> Self {
        Instance {
            psi,
            delta: None,
            m: None,
            n: None,
            lambda: None,
            weights: None,
            alpha1: None,
            alpha2: None,
            alpha: None,
            lambda_bound: None,
            delta_ops: None,
        }
    }

    pub fn with_delta(mut self, g: GFrameFamily) -> Self {
        self.delta = Some(g);
        self
    }

    pub fn with_mn(mut self, m: AdjointableOp, n: AdjointableOp) -> Self {
        self.m = Some(m);
        self.n = Some(n);
        self
    }

    pub fn with_lambda(mut self, l: AdjointableOp) -> Self {
        self.lambda = Some(l);
        self
    }

    pub fn with_weights(mut self, w: ScalarWeights) -> Self {
        self.weights = Some(w);
        self
    }

    pub fn with_alphas(mut self, a1: f64, a2: f64) -> Self {
        self.alpha1 = Some(a1);
        self.alpha2 = Some(a2);
        self
    }
}

fn need<'a, T>(v: &'a Option<T>, what: &'static str) -> Result<&'a T> {
    v.as_ref().ok_or(Error::Invalid(what))
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Outcome {
    Classification(Classification),
    Theorem(TheoremReport),
    Perturbation(PerturbationReport),
}

impl Outcome {
    pub fn verdict(&self) -> Option<Verdict> {
        match self {
            Outcome::Classification(_) => None,
            Outcome::Theorem(r) => Some(r.verdict),
            Outcome::Perturbation(r) => Some(r.verdict),
        }
    }

    pub fn achieved(&self) -> FrameBounds {
        match self {
            Outcome::Classification(c) => c.bounds,
            Outcome::Theorem(r) => r.achieved,
            Outcome::Perturbation(r) => r.achieved,
        }
    }

    /// Predicted bounds where the checker makes a prediction.
    pub fn predicted(&self) -> (Option<f64>, Option<f64>) {
        match self {
            Outcome::Theorem(r) => (r.predicted_lower, r.predicted_upper),
            _ => (None, None),
        }
    }
}

/// Runs the checker named by `kind` on `inst`.
pub fn run(kind: TheoremKind, inst: &Instance, cfg: &CheckConfig) -> Result<Outcome> {
    let f = &inst.psi;
    let delta = || need(&inst.delta, "theorem needs the second family `delta`");
    let m = || need(&inst.m, "theorem needs operator `m`");
    let n = || need(&inst.n, "theorem needs operator `n`");
    let lambda = || need(&inst.lambda, "theorem needs operator `lambda`");
    let weights = || need(&inst.weights, "theorem needs `weights`");
    let alphas = || -> Result<(f64, f64)> {
        Ok((*need(&inst.alpha1, "theorem needs `alpha1`")?, *need(&inst.alpha2, "theorem needs `alpha2`")?))
    };
    Ok(match kind {
        TheoremKind::Classify => Outcome::Classification(f.classify(cfg.tol)),
        TheoremKind::Sum(id) => Outcome::Theorem(match id {
            TheoremId::PerturbLambda => sums::perturb_lambda(f, lambda()?, cfg)?.1,
            TheoremId::T3Equiv => sums::op_weighted_sum(f, delta()?, m()?, n()?, cfg)?.1,
            TheoremId::T3Corollary => sums::t3_corollary_check(f, delta()?, cfg)?,
            TheoremId::T7Scalar => sums::scalar_weighted_sum(f, delta()?, weights()?, cfg)?.1,
            TheoremId::T11Positive => sums::t11_check(f, delta()?, weights()?, cfg)?,
            TheoremId::TightSum => sums::tight_sum_check(f, delta()?, cfg)?,
            TheoremId::IsometrySum => sums::isometry_sum_check(f, delta()?, lambda()?, cfg)?,
            TheoremId::LambdaLower => {
                let bound = *need(&inst.lambda_bound, "theorem needs `lambda_bound`")?;
                sums::lambda_lower_check(f, delta()?, m()?, n()?, bound, cfg)?
            }
            TheoremId::TightMn => sums::tight_mn_check(f, delta()?, m()?, n()?, cfg)?,
        }),
        TheoremKind::Stability(id) => Outcome::Perturbation(match id {
            StabilityId::PropMixed => {
                let (a1, a2) = alphas()?;
                stability::prop_mixed_check(f, delta()?, weights()?, a1, a2, cfg)?
            }
            StabilityId::ThmDifference => {
                let (a1, a2) = alphas()?;
                stability::difference_check(f, delta()?, weights()?, a1, a2, cfg)?
            }
            StabilityId::T12Operator => match &inst.delta_ops {
                Some(ops) => stability::t12_check(f, ops, cfg)?,
                None => stability::t12_check(f, &stability::lift_family(delta()?), cfg)?,
            },
            StabilityId::FinalCorollary => {
                let alpha = *need(&inst.alpha, "theorem needs `alpha`")?;
                stability::final_corollary_check(f, delta()?, alpha, cfg)?
            }
        }),
    })
}
