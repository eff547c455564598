use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Hypothesis};
use crate::cusum::CusumPartialSums;
use crate::error::{Error, Result};
use crate::pillowcase::pillowcase_covariance;

/// A pair of `(r, s)` evaluation points.
pub type PointPair = ((f64, f64), (f64, f64));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceCheck {
    pub pair: PointPair,
    pub empirical_cov: f64,
    pub target: f64,
    /// Monte Carlo standard error of `empirical_cov`.
    pub std_error: f64,
    /// `(empirical - target) / std_error`; zero when both vanish, `None`
    /// when only the standard error does.
    pub z_score: Option<f64>,
}

/// Compare the across-replicate covariance of `A(x)` and `A(y)` with the
/// pillowcase covariance for each pair.
pub fn covariance_check(config: &ExperimentConfig, pairs: &[PointPair]) -> Result<Vec<CovarianceCheck>> {
    if config.hypothesis != Hypothesis::H0 {
        return Err(Error::invalid("covariance check needs an H0 configuration"));
    }
    let model = config.panel_model()?;
    let samples: Vec<Vec<(f64, f64)>> = (0..config.replicates)
        .into_par_iter()
        .map(|b| {
            let panel = model.sample_replicate(config.seed, b as u64)?;
            let sums = CusumPartialSums::new(&panel, config.lmin).map_err(|e| Error::Replicate {
                replicate: b,
                source: Box::new(e),
            })?;
            Ok(pairs
                .iter()
                .map(|((r1, s1), (r2, s2))| (sums.at(*r1, *s1), sums.at(*r2, *s2)))
                .collect())
        })
        .collect::<Result<_>>()?;

    let n = samples.len() as f64;
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let xs: Vec<(f64, f64)> = samples.iter().map(|s| s[i]).collect();
            let mx = xs.iter().map(|p| p.0).sum::<f64>() / n;
            let my = xs.iter().map(|p| p.1).sum::<f64>() / n;
            let prods: Vec<f64> = xs.iter().map(|(x, y)| (x - mx) * (y - my)).collect();
            let mean_prod = prods.iter().sum::<f64>() / n;
            let empirical_cov = if n > 1.0 { mean_prod * n / (n - 1.0) } else { mean_prod };
            let var_prod = if n > 1.0 {
                prods.iter().map(|p| (p - mean_prod).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            let std_error = (var_prod / n).sqrt();
            let ((r1, s1), (r2, s2)) = *pair;
            let target = pillowcase_covariance(r1, s1, r2, s2);
            let diff = empirical_cov - target;
            let z_score = if std_error > 0.0 {
                Some(diff / std_error)
            } else if diff == 0.0 {
                Some(0.0)
            } else {
                None
            };
            CovarianceCheck {
                pair: *pair,
                empirical_cov,
                target,
                std_error,
                z_score,
            }
        })
        .collect())
}
