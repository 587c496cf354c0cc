use std::time::Instant;

use gframe_core::dispatch::{self, Outcome};
use gframe_core::{FrameKind, Verdict};
use serde::Serialize;

use crate::scenario::{Scenario, TheoremName};

#[derive(Clone, Debug, Serialize)]
pub struct Repetition {
    pub rep: usize,
    pub seed: u64,
    pub outcome: Outcome,
}

impl Repetition {
    /// Verdict label, or the frame kind for classification runs.
    pub fn label(&self) -> String {
        match &self.outcome {
            Outcome::Classification(c) => format!("{:?}", c.kind),
            other => format!("{:?}", other.verdict().expect("checker outcome has a verdict")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub conclusion_holds: usize,
    pub hypothesis_fails: usize,
    pub conclusion_fails: usize,
    /// Classification runs, which carry no verdict.
    pub classified: usize,
}

impl Aggregate {
    pub fn total(&self) -> usize {
        self.conclusion_holds + self.hypothesis_fails + self.conclusion_fails + self.classified
    }

    fn add(&mut self, outcome: &Outcome) {
        match outcome.verdict() {
            Some(Verdict::ConclusionHolds) => self.conclusion_holds += 1,
            Some(Verdict::HypothesisFails) => self.hypothesis_fails += 1,
            Some(Verdict::ConclusionFails) => self.conclusion_fails += 1,
            None => self.classified += 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub theorem: TheoremName,
    pub seed: u64,
    pub seed_stride: u64,
    pub aggregate: Aggregate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub repetitions: Vec<Repetition>,
}

impl RunReport {
    pub fn kinds(&self) -> Vec<FrameKind> {
        self.repetitions
            .iter()
            .filter_map(|r| match &r.outcome {
                Outcome::Classification(c) => Some(c.kind),
                _ => None,
            })
            .collect()
    }
}

/// Runs every repetition of `s` in order; repetition `i` uses seed
/// `seed + stride * i` for both instance generation and sampling.
pub fn run_scenario(s: &Scenario) -> gframe_core::Result<RunReport> {
    let start = Instant::now();
    let mut aggregate = Aggregate::default();
    let mut repetitions = Vec::with_capacity(s.repetitions);
    for rep in 0..s.repetitions {
        let seed = s.seed_for(rep);
        let inst = s.instance(seed)?;
        let outcome = dispatch::run(s.kind(), &inst, &s.config(seed))?;
        aggregate.add(&outcome);
        repetitions.push(Repetition { rep, seed, outcome });
    }
    Ok(RunReport {
        scenario: s.name.clone(),
        theorem: s.theorem,
        seed: s.seed,
        seed_stride: s.seed_stride,
        aggregate,
        wall_time_ms: Some(start.elapsed().as_secs_f64() * 1e3),
        repetitions,
    })
}
