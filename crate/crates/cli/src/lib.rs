//! IO, orchestration, and file formats on top of `simbias-core`.

pub mod config;
pub mod correlate;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod report;

pub use error::{Result, RunError};

use config::RunSpec;
use report::RankedReport;

/// Harvest every config and rank the results.
pub fn run(spec: &RunSpec) -> Result<RankedReport> {
    let results = parallel::harvest_all(&spec.configs, spec.trials, spec.master_seed)?;
    report::build_report(spec, &results)
}
