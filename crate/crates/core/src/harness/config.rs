use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{scenario_preset, AngularPowerSpectrum, MeanScenario, PanelModel, TemporalModel};
use crate::pillowcase::QuantileTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    H0,
    H1,
}

/// Thresholds given inline or as a path to a quantile-table JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantileSource {
    Inline(QuantileTable),
    Path(PathBuf),
}

impl QuantileSource {
    /// Load the table; relative paths are resolved against `base_dir`.
    pub fn load(&self, base_dir: Option<&Path>) -> Result<QuantileTable> {
        match self {
            QuantileSource::Inline(t) => Ok(t.clone()),
            QuantileSource::Path(p) => {
                let path = match base_dir {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p.clone(),
                };
                crate::io::read_json(&path)
            }
        }
    }
}

fn default_grid() -> usize {
    300
}

/// A Monte Carlo experiment: which mean design to simulate, at what size,
/// how many replicates, and against which thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub hypothesis: Hypothesis,
    #[serde(alias = "model_id")]
    pub model: u8,
    /// Trend exponent, used under H1 only.
    #[serde(default)]
    pub alpha: f64,
    #[serde(alias = "N")]
    pub n_times: usize,
    #[serde(alias = "L")]
    pub lmax: usize,
    #[serde(default)]
    pub lmin: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Defaults to the published reference thresholds.
    #[serde(default)]
    pub quantiles: Option<QuantileSource>,
    #[serde(default)]
    pub spectrum: AngularPowerSpectrum,
    #[serde(default)]
    pub temporal: TemporalModel,
}

impl ExperimentConfig {
    /// Null-hypothesis design with the default spectrum and iid time series.
    pub fn h0(model: u8, n_times: usize, lmax: usize, replicates: usize, seed: u64) -> Self {
        ExperimentConfig {
            hypothesis: Hypothesis::H0,
            model,
            alpha: 0.0,
            n_times,
            lmax,
            lmin: 0,
            grid: default_grid(),
            replicates,
            seed,
            quantiles: None,
            spectrum: AngularPowerSpectrum::default(),
            temporal: TemporalModel::Iid,
        }
    }

    pub fn h1(model: u8, alpha: f64, n_times: usize, lmax: usize, replicates: usize, seed: u64) -> Self {
        ExperimentConfig {
            hypothesis: Hypothesis::H1,
            alpha,
            ..Self::h0(model, n_times, lmax, replicates, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::invalid("replicates must be at least 1"));
        }
        if self.n_times < 2 {
            return Err(Error::invalid(format!("N must be at least 2, got {}", self.n_times)));
        }
        if self.lmax == 0 {
            return Err(Error::invalid("L must be at least 1"));
        }
        if self.lmin > self.lmax {
            return Err(Error::invalid(format!("lmin {} exceeds L {}", self.lmin, self.lmax)));
        }
        if self.grid == 0 {
            return Err(Error::invalid("grid must be at least 1"));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        self.temporal.validate()?;
        Ok(())
    }

    pub fn scenario(&self) -> Result<MeanScenario> {
        match self.hypothesis {
            Hypothesis::H0 => scenario_preset(self.model, false, 0.0, self.lmax),
            Hypothesis::H1 => scenario_preset(self.model, true, self.alpha, self.lmax),
        }
    }

    pub fn panel_model(&self) -> Result<PanelModel> {
        self.validate()?;
        let model = PanelModel {
            spectrum: self.spectrum.clone(),
            temporal: self.temporal.clone(),
            scenario: self.scenario()?,
            n_times: self.n_times,
            lmax: self.lmax,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn quantile_table(&self, base_dir: Option<&Path>) -> Result<QuantileTable> {
        match &self.quantiles {
            Some(src) => src.load(base_dir),
            None => Ok(QuantileTable::published()),
        }
    }
}
