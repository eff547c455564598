use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{harmonic_index, CoefficientPanel};

/// Time averages `μ̂_lm = (1/N) Σ_t β_lm(t)` in flat harmonic order.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicAverages {
    lmax: usize,
    values: Vec<f64>,
}

impl HarmonicAverages {
    pub fn get(&self, ell: usize, m: i32) -> f64 {
        self.values[harmonic_index(ell, m)]
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Mean as an unevaluated sum `hi + lo`, accurate to about `ε²`.
fn mean_hi_lo(series: &[f64]) -> (f64, f64) {
    let n = series.len() as f64;
    let (mut s, mut c) = (0.0, 0.0);
    for v in series {
        let (t, e) = two_sum(s, *v);
        s = t;
        c += e;
    }
    let (s, c) = two_sum(s, c);
    let hi = s / n;
    let residual = (-hi).mul_add(n, s);
    (hi, (residual + c) / n)
}

/// Mean of a series, exact for constant series.
pub(crate) fn series_mean(series: &[f64]) -> f64 {
    let first = series[0];
    if series.iter().all(|v| *v == first) {
        return first;
    }
    let (hi, lo) = mean_hi_lo(series);
    hi + lo
}

/// Deviations `β_lm(t) - μ̂_lm` written into `out`; all zero for a constant series.
pub(crate) fn centered_into(series: &[f64], out: &mut [f64]) {
    let first = series[0];
    if series.iter().all(|v| *v == first) {
        out.iter_mut().for_each(|o| *o = 0.0);
        return;
    }
    let (hi, lo) = mean_hi_lo(series);
    for (o, v) in out.iter_mut().zip(series) {
        *o = (v - hi) - lo;
    }
}

/// Time averages `μ̂_lm` of every coefficient series.
pub fn harmonic_averages(panel: &CoefficientPanel) -> HarmonicAverages {
    let values = (0..panel.n_harmonics())
        .map(|h| series_mean(panel.series_at(h)))
        .collect();
    HarmonicAverages {
        lmax: panel.lmax(),
        values,
    }
}

/// Sample power spectrum `C̄_l = (1 / (N (2l+1))) Σ_t Σ_m (β_lm(t) - μ̂_lm)²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePowerSpectrum {
    pub cbar: Vec<f64>,
}

impl SamplePowerSpectrum {
    pub fn get(&self, ell: usize) -> f64 {
        self.cbar[ell]
    }

    /// First multipole in `[lmin, lmax]` with a vanishing sample spectrum.
    pub fn first_degenerate(&self, lmin: usize) -> Option<usize> {
        (lmin..self.cbar.len()).find(|&l| self.cbar[l].is_nan() || self.cbar[l] <= 0.0)
    }
}

pub fn sample_power_spectrum(panel: &CoefficientPanel) -> Result<SamplePowerSpectrum> {
    let n = panel.n_times();
    if n < 2 {
        return Err(Error::invalid(format!(
            "sample power spectrum needs at least 2 time steps, got {n}"
        )));
    }
    let mut dev = vec![0.0; n];
    let cbar = (0..=panel.lmax())
        .map(|ell| {
            let mut ss = 0.0;
            for m in -(ell as i32)..=(ell as i32) {
                centered_into(panel.series(ell, m), &mut dev);
                ss += dev.iter().map(|d| d * d).sum::<f64>();
            }
            ss / (n as f64 * (2 * ell + 1) as f64)
        })
        .collect();
    Ok(SamplePowerSpectrum { cbar })
}
