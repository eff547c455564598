use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rule giving `C_l` for `l >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumRule {
    /// `C_l = 2 / (l (l + 1))`.
    InverseLaplacian,
    /// `C_l = l^{-eta}`.
    PowerLaw { eta: f64 },
    /// Explicit values for `l = 1..=values.len()`, zero above.
    Table { values: Vec<f64> },
}

/// Angular power spectrum `l ↦ C_l` with a separately configured `C_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularPowerSpectrum {
    pub c0: f64,
    pub rule: SpectrumRule,
}

impl Default for AngularPowerSpectrum {
    fn default() -> Self {
        Self::inverse_laplacian(1.0)
    }
}

impl AngularPowerSpectrum {
    pub fn inverse_laplacian(c0: f64) -> Self {
        AngularPowerSpectrum {
            c0,
            rule: SpectrumRule::InverseLaplacian,
        }
    }

    pub fn power_law(eta: f64, c0: f64) -> Self {
        AngularPowerSpectrum {
            c0,
            rule: SpectrumRule::PowerLaw { eta },
        }
    }

    pub fn table(c0: f64, values: Vec<f64>) -> Self {
        AngularPowerSpectrum {
            c0,
            rule: SpectrumRule::Table { values },
        }
    }

    /// All-zero spectrum: every coefficient is deterministic.
    pub fn zero() -> Self {
        Self::table(0.0, Vec::new())
    }

    pub fn cl(&self, ell: usize) -> f64 {
        if ell == 0 {
            return self.c0;
        }
        let l = ell as f64;
        match &self.rule {
            SpectrumRule::InverseLaplacian => 2.0 / (l * (l + 1.0)),
            SpectrumRule::PowerLaw { eta } => l.powf(-eta),
            SpectrumRule::Table { values } => values.get(ell - 1).copied().unwrap_or(0.0),
        }
    }

    /// `C_0, ..., C_lmax`, checked to be finite and non-negative.
    pub fn values_up_to(&self, lmax: usize) -> Result<Vec<f64>> {
        (0..=lmax)
            .map(|l| {
                let c = self.cl(l);
                if c.is_finite() && c >= 0.0 {
                    Ok(c)
                } else {
                    Err(Error::invalid(format!("C_{l} = {c} is not a valid variance")))
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_laplacian_values() {
        let s = AngularPowerSpectrum::default();
        assert_eq!(s.cl(0), 1.0);
        assert!((s.cl(2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.cl(4) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn table_is_zero_beyond_its_end() {
        let s = AngularPowerSpectrum::table(0.5, vec![1.0, 2.0]);
        assert_eq!(s.cl(2), 2.0);
        assert_eq!(s.cl(3), 0.0);
    }

    #[test]
    fn negative_variance_rejected() {
        let s = AngularPowerSpectrum::table(1.0, vec![1.0, -2.0]);
        assert!(s.values_up_to(1).is_ok());
        assert!(s.values_up_to(2).is_err());
    }

    #[test]
    fn serde_shape() {
        let s = AngularPowerSpectrum::power_law(4.0, 1.0);
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"c0":1.0,"rule":{"kind":"power_law","eta":4.0}}"#);
    }
}
