use rayon::prelude::*;
use simbias_core::harness::{harvest_trial, HarvestResult, ModelConfig};

use crate::error::{Result, RunError};

/// A rayon pool with `threads` workers; 0 picks the rayon default.
pub fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

/// Parallel equivalent of [`simbias_core::harness::harvest`]; output is
/// identical for any worker count.
pub fn harvest_parallel(config: &ModelConfig, trials: usize, master_seed: u64) -> Result<HarvestResult> {
    let fail = |source| RunError::Config { label: config.label.clone(), source };
    if trials == 0 {
        return Err(RunError::Spec("trials must be >= 1".into()));
    }
    config.validate().map_err(fail)?;
    let rows = (0..trials as u64)
        .into_par_iter()
        .map(|i| harvest_trial(config, master_seed, i))
        .collect::<Vec<_>>();
    let mut functions = Vec::with_capacity(trials);
    let mut scores = Vec::with_capacity(trials);
    for row in rows {
        let (f, s) = row.map_err(fail)?;
        functions.push(f);
        scores.push(s);
    }
    Ok(HarvestResult { config: config.clone(), seed: master_seed, functions, scores })
}

/// Harvests each config in turn, trials in parallel.
pub fn harvest_all(configs: &[ModelConfig], trials: usize, master_seed: u64) -> Result<Vec<HarvestResult>> {
    configs.iter().map(|c| harvest_parallel(c, trials, master_seed)).collect()
}
