use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::cusum::CusumPartialSums;
use crate::error::{Error, Result};
use crate::pillowcase::QuantileTable;

/// Rejection frequencies of an experiment, one per threshold level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionTable {
    pub config: ExperimentConfig,
    pub levels: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub frequencies: Vec<f64>,
    /// `sqrt(p (1 - p) / B)` for each frequency.
    pub standard_errors: Vec<f64>,
    pub wall_time: f64,
    /// Per-replicate sup statistics in replicate order.
    #[serde(skip)]
    pub sups: Vec<f64>,
}

/// Sup statistic of each replicate, in replicate order. Replicate `b` draws
/// from substream `(seed, b)`.
pub fn replicate_sups(config: &ExperimentConfig) -> Result<Vec<f64>> {
    let model = config.panel_model()?;
    (0..config.replicates)
        .into_par_iter()
        .map(|b| {
            let run = || -> Result<f64> {
                let panel = model.sample_replicate(config.seed, b as u64)?;
                let sums = CusumPartialSums::new(&panel, config.lmin)?;
                let surface = sums.surface(config.grid, config.grid)?;
                Ok(crate::cusum::sup_statistic(&surface))
            };
            run().map_err(|e| Error::Replicate {
                replicate: b,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Simulate `config.replicates` panels, compute each sup statistic and count
/// exceedances of every threshold in `table`.
pub fn run_rejection_experiment(config: &ExperimentConfig, table: &QuantileTable) -> Result<RejectionTable> {
    let start = Instant::now();
    let sups = replicate_sups(config)?;
    let b = sups.len() as f64;
    let mut frequencies = Vec::new();
    let mut standard_errors = Vec::new();
    for (_, threshold) in table.iter() {
        let count = sups.iter().filter(|s| **s > threshold).count();
        let p = count as f64 / b;
        frequencies.push(p);
        standard_errors.push((p * (1.0 - p) / b).sqrt());
    }
    Ok(RejectionTable {
        config: config.clone(),
        levels: table.levels().to_vec(),
        thresholds: table.thresholds().to_vec(),
        frequencies,
        standard_errors,
        wall_time: start.elapsed().as_secs_f64(),
        sups,
    })
}
