use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::runner::RunReport;
use crate::scenario::SCHEMA_VERSION;

/// Everything one invocation produced.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: u32,
    /// Seconds since the Unix epoch.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    pub scenarios: Vec<RunReport>,
}

impl ReportDocument {
    pub fn new(scenarios: Vec<RunReport>) -> Self {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).ok();
        ReportDocument { schema: SCHEMA_VERSION, generated_at: now, scenarios }
    }

    /// Drops the clock-dependent fields so equal inputs give equal bytes.
    pub fn without_timing(mut self) -> Self {
        self.generated_at = None;
        for s in &mut self.scenarios {
            s.wall_time_ms = None;
        }
        self
    }

    pub fn conclusion_failures(&self) -> usize {
        self.scenarios.iter().map(|s| s.aggregate.conclusion_fails).sum()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// One row per repetition.
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for s in &self.scenarios {
            for r in &s.repetitions {
                let achieved = r.outcome.achieved();
                let (pl, pu) = r.outcome.predicted();
                w.serialize(CsvRow {
                    scenario: &s.scenario,
                    rep: r.rep,
                    seed: r.seed,
                    verdict: r.label(),
                    achieved_lower: achieved.lower,
                    achieved_upper: achieved.upper,
                    predicted_lower: pl,
                    predicted_upper: pu,
                })?;
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    scenario: &'a str,
    rep: usize,
    seed: u64,
    verdict: String,
    achieved_lower: f64,
    achieved_upper: f64,
    predicted_lower: Option<f64>,
    predicted_upper: Option<f64>,
}
