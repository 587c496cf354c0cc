//! Scenario files: one JSON object or an array of them.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "tight-sum",
//!   "theorem": "TIGHT_SUM",
//!   "repetitions": 50,
//!   "seed": 7,
//!   "instance": { "orthogonal_pair": {
//!     "algebra_dim": 2, "module_len": 2, "member_dims": [2, 2, 2], "target": "parseval"
//!   } }
//! }
//! ```

use std::fmt;
use std::path::Path;

use gframe_core::dispatch::{Instance, TheoremKind};
use gframe_core::gen::instances::{self, InstanceShape};
use gframe_core::gen::{gen_family, gen_orthogonal_pair, GenSpec, Target};
use gframe_core::sums::ScalarWeights;
use gframe_core::{AdjointableOp, CheckConfig, GFrameFamily, Tolerance};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const SCHEMA_VERSION: u32 = 1;

/// Problems with a scenario file, reported before anything runs.
#[derive(Debug)]
pub enum ValidationError {
    Io {
        path: String,
        message: String,
    },
    /// Malformed JSON or a field of the wrong shape.
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    Invalid {
        scenario: String,
        message: String,
    },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::Io { path, message } => write!(f, "{path}: {message}"),
            ValidationError::Syntax { line, column, message } => {
                write!(f, "line {line}, column {column}: {message}")
            }
            ValidationError::Invalid { scenario, message } => write!(f, "scenario `{scenario}`: {message}"),
        }
    }
}

impl std::error::Error for ValidationError {}

/// Theorem id as it appears in files, e.g. `"T7_SCALAR"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoremName(pub TheoremKind);

impl Serialize for TheoremName {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.name())
    }
}

impl<'de> Deserialize<'de> for TheoremName {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map(TheoremName).map_err(|_| {
            let known: Vec<_> = TheoremKind::ALL.iter().map(|k| k.name()).collect();
            serde::de::Error::custom(format!("unknown theorem `{s}`, expected one of {}", known.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    pub theorem: TheoremName,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one_u64")]
    pub seed_stride: u64,
    #[serde(default)]
    pub tolerance: Tolerance,
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub instance: InstanceSource,
}

fn one() -> usize {
    1
}

fn one_u64() -> u64 {
    1
}

fn default_samples() -> usize {
    CheckConfig::default().samples
}

/// Where the checker input comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSource {
    /// Hypothesis-satisfying random instance for the scenario's theorem.
    Generated(InstanceShape),
    /// A single generated family as `psi`.
    Family(FamilySpec),
    /// Orthogonal pair as `psi` and `delta`, members scaled by `sqrt(scales)`
    /// so Parseval halves become `scales`-tight.
    OrthogonalPair(PairSpec),
    Inline(Box<InlineInstance>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub algebra_dim: usize,
    pub module_len: usize,
    pub member_dims: Vec<usize>,
    pub target: Target,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub algebra_dim: usize,
    pub module_len: usize,
    pub member_dims: Vec<usize>,
    pub target: Target,
    #[serde(default = "unit_scales")]
    pub scales: (f64, f64),
}

fn unit_scales() -> (f64, f64) {
    (1.0, 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineInstance {
    pub psi: GFrameFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<GFrameFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<AdjointableOp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<AdjointableOp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<AdjointableOp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<ScalarWeights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_ops: Option<Vec<AdjointableOp>>,
}

impl From<InlineInstance> for Instance {
    fn from(i: InlineInstance) -> Self {
        Instance {
            psi: i.psi,
            delta: i.delta,
            m: i.m,
            n: i.n,
            lambda: i.lambda,
            weights: i.weights,
            alpha1: i.alpha1,
            alpha2: i.alpha2,
            alpha: i.alpha,
            lambda_bound: i.lambda_bound,
            delta_ops: i.delta_ops,
        }
    }
}

impl Scenario {
    pub fn kind(&self) -> TheoremKind {
        self.theorem.0
    }

    pub fn config(&self, seed: u64) -> CheckConfig {
        CheckConfig { tol: self.tolerance, samples: self.samples, seed }
    }

    /// Seed of repetition `rep`.
    pub fn seed_for(&self, rep: usize) -> u64 {
        self.seed.wrapping_add(self.seed_stride.wrapping_mul(rep as u64))
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let bad = |message: String| Err(ValidationError::Invalid { scenario: self.name.clone(), message });
        if self.schema != SCHEMA_VERSION {
            return bad(format!("unsupported schema {}, expected {SCHEMA_VERSION}", self.schema));
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if Tolerance::new(self.tolerance.rel, self.tolerance.abs).is_err() {
            return bad("tolerance components must be nonnegative".into());
        }
        let shape_check = match &self.instance {
            InstanceSource::Generated(s) => {
                GenSpec::new(0, s.algebra_dim, s.module_len, s.member_dims.clone(), Target::Random).validate()
            }
            InstanceSource::Family(s) => {
                GenSpec::new(0, s.algebra_dim, s.module_len, s.member_dims.clone(), s.target).validate()
            }
            InstanceSource::OrthogonalPair(s) => {
                if !(s.scales.0 > 0.0 && s.scales.1 > 0.0) {
                    return bad("pair scales must be positive".into());
                }
                GenSpec::new(0, s.algebra_dim, s.module_len, s.member_dims.clone(), s.target).validate()
            }
            InstanceSource::Inline(_) => Ok(()),
        };
        if let Err(e) = shape_check {
            return bad(e.to_string());
        }
        Ok(())
    }

    /// Checker input for one repetition.
    pub fn instance(&self, seed: u64) -> gframe_core::Result<Instance> {
        match &self.instance {
            InstanceSource::Generated(shape) => instances::build(self.kind(), shape, seed),
            InstanceSource::Family(s) => {
                let spec = GenSpec::new(seed, s.algebra_dim, s.module_len, s.member_dims.clone(), s.target);
                Ok(Instance::new(gen_family(&spec)?))
            }
            InstanceSource::OrthogonalPair(s) => {
                let spec = GenSpec::new(seed, s.algebra_dim, s.module_len, s.member_dims.clone(), s.target);
                let (f, g) = gen_orthogonal_pair(&spec)?;
                Ok(Instance::new(f.scale_real(s.scales.0.sqrt())).with_delta(g.scale_real(s.scales.1.sqrt())))
            }
            InstanceSource::Inline(i) => Ok(Instance::from((**i).clone())),
        }
    }
}

/// Parses and validates scenario text.
pub fn parse(text: &str) -> Result<Vec<Scenario>, ValidationError> {
    // Parsing twice keeps serde's line/column on the second pass.
    let value: serde_json::Value = serde_json::from_str(text).map_err(syntax)?;
    let scenarios = if value.is_array() {
        serde_json::from_str::<Vec<Scenario>>(text).map_err(syntax)?
    } else {
        vec![serde_json::from_str::<Scenario>(text).map_err(syntax)?]
    };
    if scenarios.is_empty() {
        return Err(ValidationError::Invalid { scenario: String::new(), message: "file holds no scenarios".into() });
    }
    for s in &scenarios {
        s.validate()?;
    }
    Ok(scenarios)
}

pub fn load(path: &Path) -> Result<Vec<Scenario>, ValidationError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ValidationError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse(&text)
}

fn syntax(e: serde_json::Error) -> ValidationError {
    ValidationError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}
