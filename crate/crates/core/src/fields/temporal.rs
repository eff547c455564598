use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible AR(1) coefficient magnitude.
pub const MAX_AR_COEFFICIENT: f64 = 0.95;

/// Temporal dependence of each coefficient series `a_lm(·)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TemporalModel {
    #[default]
    Iid,
    /// Stationary AR(1) with lag-τ covariance `C_l φ_l^|τ|`. `phi[l]` is the
    /// coefficient of multipole `l`; degrees past the end reuse the last entry.
    Ar1 { phi: Vec<f64> },
}

impl TemporalModel {
    pub fn ar1_uniform(phi: f64) -> Result<Self> {
        let model = TemporalModel::Ar1 { phi: vec![phi] };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if let TemporalModel::Ar1 { phi } = self {
            if phi.is_empty() {
                return Err(Error::invalid("AR(1) model needs at least one coefficient"));
            }
            if let Some(p) = phi.iter().find(|p| p.is_nan() || p.abs() > MAX_AR_COEFFICIENT) {
                return Err(Error::invalid(format!(
                    "AR(1) coefficient {p} outside [-{MAX_AR_COEFFICIENT}, {MAX_AR_COEFFICIENT}]"
                )));
            }
        }
        Ok(())
    }

    /// Lag-one autocorrelation of multipole `ell`.
    pub fn phi(&self, ell: usize) -> f64 {
        match self {
            TemporalModel::Iid => 0.0,
            TemporalModel::Ar1 { phi } => phi[ell.min(phi.len() - 1)],
        }
    }

    /// Normalized spectral density `f_l(λ) / C_l`.
    pub fn normalized_spectral_density(&self, ell: usize, lambda: f64) -> f64 {
        let p = self.phi(ell);
        (1.0 - p * p) / (2.0 * PI * (1.0 - 2.0 * p * lambda.cos() + p * p))
    }

    /// Closed-form lower and upper bounds of the normalized spectral density
    /// over `λ ∈ [-π, π]`.
    pub fn density_bounds(&self, ell: usize) -> (f64, f64) {
        let a = self.phi(ell).abs();
        ((1.0 - a) / (2.0 * PI * (1.0 + a)), (1.0 + a) / (2.0 * PI * (1.0 - a)))
    }
}
