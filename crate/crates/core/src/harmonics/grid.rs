use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::ylm::SphericalPoint;
use crate::error::{Error, Result};

/// Nodes and positive weights on the sphere integrating products of
/// harmonics of degree `<= exactness_order` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubatureGrid {
    points: Vec<SphericalPoint>,
    weights: Vec<f64>,
    exactness_order: usize,
}

impl CubatureGrid {
    /// Wrap user-provided nodes and weights. The claimed exactness order is
    /// not verified here; use [`cubature_residual`](super::cubature_residual).
    pub fn new(points: Vec<SphericalPoint>, weights: Vec<f64>, exactness_order: usize) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::invalid(format!(
                "grid needs matching, non-empty point and weight lists (got {} and {})",
                points.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::invalid(format!("cubature weight {w} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 4.0 * PI).abs() > 1e-9 * 4.0 * PI {
            return Err(Error::invalid(format!("cubature weights sum to {total}, expected 4π")));
        }
        Ok(CubatureGrid {
            points,
            weights,
            exactness_order,
        })
    }

    pub fn points(&self) -> &[SphericalPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exactness_order(&self) -> usize {
        self.exactness_order
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ordered from `+1` down.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rings in `cos θ` times equispaced longitudes.
///
/// Uses `lstar + 1` rings and `2 lstar + 2` longitudes per ring; the weight
/// of node `(i, j)` is the Gauss weight of ring `i` times `2π / n_φ`. Points
/// are ordered ring by ring from north to south.
pub fn build_gauss_grid(lstar: usize) -> CubatureGrid {
    let n_theta = lstar + 1;
    let n_phi = 2 * lstar + 2;
    let (nodes, gw) = gauss_legendre(n_theta);
    let dphi = TAU / n_phi as f64;
    let mut points = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (u, w) in nodes.iter().zip(&gw) {
        let theta = u.clamp(-1.0, 1.0).acos();
        for j in 0..n_phi {
            points.push(SphericalPoint {
                theta,
                phi: j as f64 * dphi,
            });
            weights.push(w * dphi);
        }
    }
    CubatureGrid {
        points,
        weights,
        exactness_order: lstar,
    }
}
