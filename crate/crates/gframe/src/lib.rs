//! Scenario files, the runner behind the `gframe` binary, and report
//! formats. The numerics live in `gframe-core`.

pub mod report;
pub mod runner;
pub mod scenario;

pub use report::ReportDocument;
pub use runner::{run_scenario, Aggregate, Repetition, RunReport};
pub use scenario::{load, parse, InstanceSource, Scenario, ValidationError};

/// Exit status when every scenario ran and no conclusion failed.
pub const EXIT_OK: i32 = 0;
/// Some hypothesis-satisfying instance violated its conclusion.
pub const EXIT_CONCLUSION_FAILS: i32 = 1;
/// Bad input: unreadable file, malformed JSON, invalid scenario, or an
/// instance that could not be built.
pub const EXIT_INVALID: i32 = 2;
