use serde::{Deserialize, Serialize};

use super::spectrum::{centered_into, sample_power_spectrum, SamplePowerSpectrum};
use crate::error::{Error, Result};
use crate::harmonics::CoefficientPanel;

/// Sizes entering the normalization of a statistic surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceMeta {
    pub n_times: usize,
    pub lmax: usize,
    pub lmin: usize,
}

/// Double partial sums of the studentized, centered coefficients.
///
/// `partial[c][T] = Σ_{l=lmin}^{c} Σ_{t=1}^{T} Z_l(t)` for `c = 0..=L`,
/// `T = 0..=N`, where
/// `Z_l(t) = (2l+1)^{-1/2} Σ_m (β_lm(t) - μ̂_lm) / sqrt(C̄_l)`.
/// The statistic is `A(r, s) = partial[⌊L r⌋][⌊N s⌋] / sqrt(N L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CusumPartialSums {
    meta: SurfaceMeta,
    spectrum: SamplePowerSpectrum,
    partial: Vec<f64>,
}

impl CusumPartialSums {
    pub fn new(panel: &CoefficientPanel, lmin: usize) -> Result<Self> {
        let spectrum = sample_power_spectrum(panel)?;
        Self::with_spectrum(panel, lmin, spectrum)
    }

    /// Reuse an already computed sample spectrum of `panel`.
    pub fn with_spectrum(panel: &CoefficientPanel, lmin: usize, spectrum: SamplePowerSpectrum) -> Result<Self> {
        let n = panel.n_times();
        let lmax = panel.lmax();
        if n < 2 {
            return Err(Error::invalid(format!(
                "statistic needs at least 2 time steps, got {n}"
            )));
        }
        if lmax == 0 {
            return Err(Error::invalid("statistic needs lmax >= 1 (normalization by sqrt(L))"));
        }
        if lmin > lmax {
            return Err(Error::invalid(format!("lmin {lmin} exceeds panel lmax {lmax}")));
        }
        if spectrum.cbar.len() != lmax + 1 {
            return Err(Error::invalid("sample spectrum does not match panel degree"));
        }
        if let Some(ell) = spectrum.first_degenerate(lmin) {
            return Err(Error::DegenerateMultipole { ell });
        }

        let stride = n + 1;
        let mut partial = vec![0.0; (lmax + 1) * stride];
        let mut dev = vec![0.0; n];
        let mut z = vec![0.0; n];
        for ell in lmin..=lmax {
            z.iter_mut().for_each(|v| *v = 0.0);
            for m in -(ell as i32)..=(ell as i32) {
                centered_into(panel.series(ell, m), &mut dev);
                for (zv, d) in z.iter_mut().zip(&dev) {
                    *zv += d;
                }
            }
            let scale = 1.0 / ((2 * ell + 1) as f64 * spectrum.cbar[ell]).sqrt();
            let (done, rest) = partial.split_at_mut(ell * stride);
            let row = &mut rest[..stride];
            let mut running = 0.0;
            for t in 0..n {
                running += z[t] * scale;
                row[t + 1] = running;
            }
            if ell > lmin {
                let prev = &done[(ell - 1) * stride..];
                for (r, p) in row.iter_mut().zip(prev) {
                    *r += p;
                }
            }
            // Full-sample centering makes the last column vanish identically.
            row[n] = 0.0;
        }
        Ok(CusumPartialSums {
            meta: SurfaceMeta { n_times: n, lmax, lmin },
            spectrum,
            partial,
        })
    }

    pub fn meta(&self) -> SurfaceMeta {
        self.meta
    }

    pub fn sample_spectrum(&self) -> &SamplePowerSpectrum {
        &self.spectrum
    }

    fn norm(&self) -> f64 {
        1.0 / ((self.meta.n_times * self.meta.lmax) as f64).sqrt()
    }

    /// Value at integer cut-offs: multipoles `lmin..=ell_cut`, times `1..=t_cut`.
    pub fn at_index(&self, ell_cut: usize, t_cut: usize) -> f64 {
        self.partial[ell_cut * (self.meta.n_times + 1) + t_cut] * self.norm()
    }

    /// `A(r, s)` for arbitrary `r, s ∈ [0, 1]`.
    pub fn at(&self, r: f64, s: f64) -> f64 {
        let c = floor_product(self.meta.lmax, r);
        let t = floor_product(self.meta.n_times, s);
        self.at_index(c, t)
    }

    /// Evaluate on `r_j = j / grid_r`, `s_k = k / grid_s`.
    pub fn surface(&self, grid_r: usize, grid_s: usize) -> Result<StatisticSurface> {
        if grid_r == 0 || grid_s == 0 {
            return Err(Error::invalid("surface grids need at least one interval"));
        }
        let SurfaceMeta { n_times, lmax, .. } = self.meta;
        let mut values = Vec::with_capacity((grid_r + 1) * (grid_s + 1));
        for j in 0..=grid_r {
            let c = lmax * j / grid_r;
            for k in 0..=grid_s {
                values.push(self.at_index(c, n_times * k / grid_s));
            }
        }
        Ok(StatisticSurface {
            grid_r,
            grid_s,
            values,
            meta: self.meta,
        })
    }

    /// Supremum over all distinct `(⌊L r⌋, ⌊N s⌋)` pairs, i.e. over a grid fine
    /// enough to hit every cut-off.
    pub fn sup(&self) -> f64 {
        self.partial.iter().fold(0.0, |acc: f64, v| acc.max(v.abs())) * self.norm()
    }
}

fn floor_product(n: usize, x: f64) -> usize {
    let v = n as f64 * x.clamp(0.0, 1.0);
    ((v + 1e-9 * v.max(1.0)).floor() as usize).min(n)
}

/// `A_{L,N}(r_j, s_k)` on a rectangular grid; rows index `r`, columns `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticSurface {
    pub grid_r: usize,
    pub grid_s: usize,
    pub values: Vec<f64>,
    pub meta: SurfaceMeta,
}

impl StatisticSurface {
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[j * (self.grid_s + 1) + k]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * (self.grid_s + 1)..(j + 1) * (self.grid_s + 1)]
    }
}

/// The CUSUM surface
///
/// ```text
/// A(r, s) = (N L)^{-1/2} Σ_{t=1}^{⌊N s⌋} Σ_{l=lmin}^{⌊L r⌋} (2l+1)^{-1/2}
///           Σ_m (β_lm(t) - μ̂_lm) / sqrt(C̄_l)
/// ```
///
/// on `r_j = j / grid_r`, `s_k = k / grid_s`, with `L = panel.lmax()`.
pub fn statistic_surface(
    panel: &CoefficientPanel,
    lmin: usize,
    grid_r: usize,
    grid_s: usize,
) -> Result<StatisticSurface> {
    CusumPartialSums::new(panel, lmin)?.surface(grid_r, grid_s)
}

/// `max |A|` over the surface grid.
pub fn sup_statistic(surface: &StatisticSurface) -> f64 {
    surface.values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}
