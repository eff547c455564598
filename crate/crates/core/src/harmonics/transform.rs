use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::grid::CubatureGrid;
use super::ylm::{harmonic_count, harmonic_index, HarmonicEvaluator};
use crate::error::{Error, Result};

/// Harmonic coefficients `β_lm(t)` for `0 <= l <= lmax`, `-l <= m <= l`
/// and `n_times` time steps.
///
/// Storage is harmonic-major: the series for one `(l, m)` is contiguous.
/// Time indices are zero-based in the API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientPanel {
    lmax: usize,
    n_times: usize,
    values: Vec<f64>,
}

impl CoefficientPanel {
    pub fn zeros(lmax: usize, n_times: usize) -> Self {
        CoefficientPanel {
            lmax,
            n_times,
            values: vec![0.0; harmonic_count(lmax) * n_times],
        }
    }

    /// Wrap a harmonic-major value buffer, rejecting non-finite entries.
    pub fn from_values(lmax: usize, n_times: usize, values: Vec<f64>) -> Result<Self> {
        if n_times == 0 {
            return Err(Error::invalid("panel needs at least one time step"));
        }
        let want = harmonic_count(lmax) * n_times;
        if values.len() != want {
            return Err(Error::invalid(format!(
                "panel with lmax {lmax} and {n_times} times needs {want} values, got {}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite panel value at flat index {pos}")));
        }
        Ok(CoefficientPanel { lmax, n_times, values })
    }

    pub fn from_fn(lmax: usize, n_times: usize, mut f: impl FnMut(usize, i32, usize) -> f64) -> Self {
        let mut panel = Self::zeros(lmax, n_times);
        for l in 0..=lmax {
            for m in -(l as i32)..=(l as i32) {
                let series = panel.series_mut(l, m);
                for (t, v) in series.iter_mut().enumerate() {
                    *v = f(l, m, t);
                }
            }
        }
        panel
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    pub fn n_harmonics(&self) -> usize {
        harmonic_count(self.lmax)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    fn offset(&self, ell: usize, m: i32) -> usize {
        debug_assert!(ell <= self.lmax && m.unsigned_abs() as usize <= ell);
        harmonic_index(ell, m) * self.n_times
    }

    #[inline]
    pub fn get(&self, ell: usize, m: i32, t: usize) -> f64 {
        self.values[self.offset(ell, m) + t]
    }

    #[inline]
    pub fn set(&mut self, ell: usize, m: i32, t: usize, value: f64) {
        let o = self.offset(ell, m);
        self.values[o + t] = value;
    }

    pub fn series(&self, ell: usize, m: i32) -> &[f64] {
        let o = self.offset(ell, m);
        &self.values[o..o + self.n_times]
    }

    pub fn series_mut(&mut self, ell: usize, m: i32) -> &mut [f64] {
        let o = self.offset(ell, m);
        let n = self.n_times;
        &mut self.values[o..o + n]
    }

    /// Series of harmonic number `h` in the flat ordering.
    pub fn series_at(&self, h: usize) -> &[f64] {
        &self.values[h * self.n_times..(h + 1) * self.n_times]
    }

    /// Coefficients restricted to degrees `<= lmax`.
    pub fn truncated(&self, lmax: usize) -> Result<Self> {
        if lmax > self.lmax {
            return Err(Error::invalid(format!(
                "cannot truncate a degree-{} panel to degree {lmax}",
                self.lmax
            )));
        }
        let n = harmonic_count(lmax) * self.n_times;
        Ok(CoefficientPanel {
            lmax,
            n_times: self.n_times,
            values: self.values[..n].to_vec(),
        })
    }

    /// Largest absolute entrywise difference to another panel of equal shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.lmax, self.n_times), (other.lmax, other.n_times));
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Field values on the nodes of a cubature grid, one map per time step.
#[derive(Debug, Clone)]
pub struct FieldSnapshot {
    grid: Arc<CubatureGrid>,
    n_times: usize,
    /// Time-major: `samples[t * n_points + k]`.
    samples: Vec<f64>,
}

impl FieldSnapshot {
    pub fn new(grid: Arc<CubatureGrid>, n_times: usize, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() * n_times {
            return Err(Error::invalid(format!(
                "snapshot needs {} x {} samples, got {}",
                grid.len(),
                n_times,
                samples.len()
            )));
        }
        Ok(FieldSnapshot { grid, n_times, samples })
    }

    /// Sample `f(point, t)` at every node and time step.
    pub fn from_fn(
        grid: Arc<CubatureGrid>,
        n_times: usize,
        mut f: impl FnMut(super::SphericalPoint, usize) -> f64,
    ) -> Self {
        let mut samples = Vec::with_capacity(grid.len() * n_times);
        for t in 0..n_times {
            samples.extend(grid.points().iter().map(|p| f(*p, t)));
        }
        FieldSnapshot { grid, n_times, samples }
    }

    pub fn grid(&self) -> &Arc<CubatureGrid> {
        &self.grid
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// The map at time step `t`.
    pub fn map(&self, t: usize) -> &[f64] {
        let n = self.grid.len();
        &self.samples[t * n..(t + 1) * n]
    }
}

/// Discrete forward transform: `β*_lm(t) = Σ_k T(ξ_k, t) Y_lm(ξ_k) λ_k`.
///
/// Fails when `lmax` exceeds the grid's exactness order.
pub fn analyze(field: &FieldSnapshot, lmax: usize) -> Result<CoefficientPanel> {
    let grid = field.grid();
    if lmax > grid.exactness_order() {
        return Err(Error::AliasingOrder {
            lmax,
            order: grid.exactness_order(),
        });
    }
    let n_points = grid.len();
    let n_times = field.n_times();
    let n_h = harmonic_count(lmax);

    let mut panel = CoefficientPanel::zeros(lmax, n_times);
    let mut ev = HarmonicEvaluator::new(lmax);
    let mut ys = vec![0.0; n_h];
    let mut column = vec![0.0; n_times];
    for (k, (point, weight)) in grid.points().iter().zip(grid.weights()).enumerate() {
        ev.fill(*point, &mut ys);
        for (t, c) in column.iter_mut().enumerate() {
            *c = field.samples[t * n_points + k] * weight;
        }
        for (h, y) in ys.iter().enumerate() {
            let dst = &mut panel.values[h * n_times..(h + 1) * n_times];
            for (d, c) in dst.iter_mut().zip(&column) {
                *d += y * c;
            }
        }
    }
    Ok(panel)
}

/// Pointwise synthesis `T(ξ, t) = Σ_{l, m} β_lm(t) Y_lm(ξ)` on every grid node.
pub fn synthesize(panel: &CoefficientPanel, grid: Arc<CubatureGrid>) -> FieldSnapshot {
    let n_points = grid.len();
    let n_times = panel.n_times();
    let mut samples = vec![0.0; n_points * n_times];
    let mut ev = HarmonicEvaluator::new(panel.lmax());
    let mut ys = vec![0.0; panel.n_harmonics()];
    let mut acc = vec![0.0; n_times];
    for (k, point) in grid.points().iter().enumerate() {
        ev.fill(*point, &mut ys);
        acc.iter_mut().for_each(|a| *a = 0.0);
        for (h, y) in ys.iter().enumerate() {
            for (a, b) in acc.iter_mut().zip(panel.series_at(h)) {
                *a += y * b;
            }
        }
        for (t, a) in acc.iter().enumerate() {
            samples[t * n_points + k] = *a;
        }
    }
    FieldSnapshot { grid, n_times, samples }
}

/// Largest deviation of the discrete Gram matrix of `{Y_lm : l <= lmax}` on
/// the grid from the identity.
pub fn cubature_residual(grid: &CubatureGrid, lmax: usize) -> f64 {
    let n_h = harmonic_count(lmax);
    let mut gram = vec![0.0; n_h * n_h];
    let mut ev = HarmonicEvaluator::new(lmax);
    let mut ys = vec![0.0; n_h];
    for (point, w) in grid.points().iter().zip(grid.weights()) {
        ev.fill(*point, &mut ys);
        for i in 0..n_h {
            let wy = w * ys[i];
            let row = &mut gram[i * n_h..i * n_h + i + 1];
            for (g, y) in row.iter_mut().zip(&ys[..=i]) {
                *g += wy * y;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..n_h {
        for j in 0..=i {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[i * n_h + j] - target).abs());
        }
    }
    worst
}
