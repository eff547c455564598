use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::paths::{sample_pillowcase, sample_pillowcase_wishart};
use crate::error::{Error, Result};
use crate::rng::substream;

/// Smallest admissible number of outer draws.
pub const MIN_DRAWS: usize = 100;

/// How each sup-norm draw is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupSampler {
    /// Wishart route when `inner_n > grid`, direct otherwise.
    #[default]
    Auto,
    /// Explicit sum of `inner_n` motion/bridge outer products.
    Direct,
    /// Bartlett-factor reduction with the same law as `Direct`.
    Wishart,
    /// Thresholds copied from a published table; no sampling.
    Published,
}

impl SupSampler {
    fn resolve(self, grid: usize, inner_n: usize) -> Result<SupSampler> {
        match self {
            SupSampler::Auto if inner_n > grid => Ok(SupSampler::Wishart),
            SupSampler::Auto => Ok(SupSampler::Direct),
            SupSampler::Wishart if inner_n < grid => Err(Error::invalid(format!(
                "Wishart sampler needs inner_n >= grid ({inner_n} < {grid})"
            ))),
            SupSampler::Published => Err(Error::invalid("published tables cannot be sampled")),
            other => Ok(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawTable {
    levels: Vec<f64>,
    thresholds: Vec<f64>,
    grid: usize,
    inner_n: usize,
    draws: usize,
    seed: Option<u64>,
    #[serde(default)]
    sampler: SupSampler,
}

/// Sup-norm rejection thresholds of the Brownian pillowcase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct QuantileTable {
    levels: Vec<f64>,
    thresholds: Vec<f64>,
    grid: usize,
    inner_n: usize,
    draws: usize,
    seed: Option<u64>,
    sampler: SupSampler,
}

impl TryFrom<RawTable> for QuantileTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        if raw.levels.is_empty() || raw.levels.len() != raw.thresholds.len() {
            return Err(Error::invalid(
                "quantile table needs matching, non-empty levels and thresholds",
            ));
        }
        check_levels(&raw.levels)?;
        if let Some(t) = raw.thresholds.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::invalid(format!("threshold {t} is not positive")));
        }
        if raw.thresholds.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("thresholds must not decrease with the level"));
        }
        Ok(QuantileTable {
            levels: raw.levels,
            thresholds: raw.thresholds,
            grid: raw.grid,
            inner_n: raw.inner_n,
            draws: raw.draws,
            seed: raw.seed,
            sampler: raw.sampler,
        })
    }
}

impl From<QuantileTable> for RawTable {
    fn from(t: QuantileTable) -> Self {
        RawTable {
            levels: t.levels,
            thresholds: t.thresholds,
            grid: t.grid,
            inner_n: t.inner_n,
            draws: t.draws,
            seed: t.seed,
            sampler: t.sampler,
        }
    }
}

fn check_levels(levels: &[f64]) -> Result<()> {
    if let Some(l) = levels.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
        return Err(Error::invalid(format!("level {l} outside (0, 1)")));
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("levels must be strictly increasing"));
    }
    Ok(())
}

impl QuantileTable {
    /// Build a table from explicit thresholds (e.g. computed elsewhere).
    pub fn from_thresholds(levels: Vec<f64>, thresholds: Vec<f64>) -> Result<Self> {
        RawTable {
            levels,
            thresholds,
            grid: 0,
            inner_n: 0,
            draws: 0,
            seed: None,
            sampler: SupSampler::Published,
        }
        .try_into()
    }

    /// The reference thresholds 1.2911 / 1.4142 / 1.7104 at levels
    /// 0.90 / 0.95 / 0.99 (grid 300, n = 10000, 2000 draws).
    #[allow(clippy::approx_constant)]
    pub fn published() -> Self {
        QuantileTable {
            levels: vec![0.90, 0.95, 0.99],
            thresholds: vec![1.2911, 1.4142, 1.7104],
            grid: 300,
            inner_n: 10_000,
            draws: 2000,
            seed: None,
            sampler: SupSampler::Published,
        }
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn inner_n(&self) -> usize {
        self.inner_n
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn sampler(&self) -> SupSampler {
        self.sampler
    }

    pub fn threshold(&self, level: f64) -> Result<f64> {
        self.levels
            .iter()
            .position(|l| (l - level).abs() < 1e-9)
            .map(|i| self.thresholds[i])
            .ok_or(Error::MissingLevel(level))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.levels.iter().copied().zip(self.thresholds.iter().copied())
    }
}

/// One-based rank `⌈level · B⌉` of the order statistic used as threshold.
pub fn order_statistic_rank(level: f64, draws: usize) -> usize {
    let x = level * draws as f64;
    ((x - 1e-9 * x.max(1.0)).ceil() as usize).clamp(1, draws)
}

/// Monte Carlo sup-norm sample: `draws` independent values of
/// `max_{grid} |W_n|`, draw `b` using substream `(seed, b)`.
pub fn sample_sups(
    grid: usize,
    inner_n: usize,
    draws: usize,
    seed: u64,
    sampler: SupSampler,
) -> Result<(Vec<f64>, SupSampler)> {
    if grid == 0 {
        return Err(Error::invalid("grid must be at least 1"));
    }
    if inner_n == 0 {
        return Err(Error::invalid("inner_n must be at least 1"));
    }
    let method = sampler.resolve(grid, inner_n)?;
    let sups = (0..draws)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(seed, b as u64);
            let draw = match method {
                SupSampler::Wishart => sample_pillowcase_wishart(grid, inner_n, &mut rng),
                _ => sample_pillowcase(grid, inner_n, &mut rng),
            };
            draw.sup_abs()
        })
        .collect();
    Ok((sups, method))
}

/// Sup-norm quantiles of the pillowcase by Monte Carlo; the threshold at a
/// level is the raw order statistic of rank `⌈level · draws⌉`.
pub fn estimate_quantiles(
    grid: usize,
    inner_n: usize,
    draws: usize,
    levels: &[f64],
    seed: u64,
    sampler: SupSampler,
) -> Result<QuantileTable> {
    if draws < MIN_DRAWS {
        return Err(Error::invalid(format!("draws below minimum {MIN_DRAWS}")));
    }
    if levels.is_empty() {
        return Err(Error::invalid("at least one level is required"));
    }
    check_levels(levels)?;
    let (mut sups, method) = sample_sups(grid, inner_n, draws, seed, sampler)?;
    sups.sort_by(f64::total_cmp);
    let thresholds = levels
        .iter()
        .map(|l| sups[order_statistic_rank(*l, draws) - 1])
        .collect();
    RawTable {
        levels: levels.to_vec(),
        thresholds,
        grid,
        inner_n,
        draws,
        seed: Some(seed),
        sampler: method,
    }
    .try_into()
}
