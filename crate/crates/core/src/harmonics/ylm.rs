use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::legendre::NormalizedLegendre;
use crate::error::{Error, Result};

/// A point on the unit sphere: colatitude `theta` in `[0, π]` measured from
/// the north pole, longitude `phi` in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::domain(format!("colatitude {theta} outside [0, π]")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::domain(format!("longitude {phi} outside [0, 2π)")));
        }
        Ok(SphericalPoint { theta, phi })
    }

    /// Build a point, reducing the longitude modulo 2π.
    pub fn wrapped(theta: f64, phi: f64) -> Result<Self> {
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self::new(theta, phi)
    }

    /// Point from geographic latitude and longitude in degrees.
    pub fn from_lat_lon_deg(lat: f64, lon: f64) -> Result<Self> {
        Self::wrapped((90.0 - lat).to_radians().clamp(0.0, PI), lon.to_radians())
    }

    /// The antipodal point `(π - θ, φ + π)`.
    pub fn antipode(&self) -> Self {
        let mut phi = (self.phi + PI).rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        SphericalPoint {
            theta: PI - self.theta,
            phi,
        }
    }
}

/// Position of `(ell, m)` in the flat harmonic ordering used throughout the
/// crate: `ell² + ell + m`.
#[inline]
pub fn harmonic_index(ell: usize, m: i32) -> usize {
    ((ell * ell + ell) as isize + m as isize) as usize
}

/// Number of real harmonics with degree `<= lmax`.
#[inline]
pub fn harmonic_count(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// Real, fully normalized spherical harmonic `Y_lm(θ, φ)`.
///
/// `m < 0` selects the `sin(|m|φ)` branch, `m > 0` the `cos(mφ)` branch and
/// `m = 0` the zonal one. The basis is orthonormal on the sphere.
///
/// ```
/// use sphere_cusum::harmonics::{real_sph_harm, SphericalPoint};
/// let p = SphericalPoint::new(0.7, 2.1).unwrap();
/// let y00 = real_sph_harm(0, 0, p).unwrap();
/// assert!((y00 - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
/// ```
pub fn real_sph_harm(ell: usize, m: i32, point: SphericalPoint) -> Result<f64> {
    let am = m.unsigned_abs() as usize;
    if am > ell {
        return Err(Error::domain(format!("|m| = {am} exceeds ell = {ell}")));
    }
    let u = point.theta.cos();
    let s = point.theta.sin().abs();

    // Single-column recurrence: only order |m| is needed.
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=am {
        pmm *= ((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * s;
    }
    let mut p = pmm;
    if ell > am {
        let mf = am as f64;
        let mut prev = pmm;
        let mut cur = ((2 * am + 3) as f64).sqrt() * u * pmm;
        for l in (am + 2)..=ell {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let lm1 = lf - 1.0;
            let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
            let next = a * (u * cur - b * prev);
            prev = cur;
            cur = next;
        }
        p = cur;
    }

    Ok(match m {
        0 => p,
        m if m > 0 => std::f64::consts::SQRT_2 * p * (m as f64 * point.phi).cos(),
        _ => std::f64::consts::SQRT_2 * p * (am as f64 * point.phi).sin(),
    })
}

/// Evaluates every `Y_lm` with `l <= lmax` at one point, reusing buffers.
#[derive(Debug, Clone)]
pub struct HarmonicEvaluator {
    legendre: NormalizedLegendre,
    cos_m: Vec<f64>,
    sin_m: Vec<f64>,
}

impl HarmonicEvaluator {
    pub fn new(lmax: usize) -> Self {
        HarmonicEvaluator {
            legendre: NormalizedLegendre::new(lmax),
            cos_m: vec![0.0; lmax + 1],
            sin_m: vec![0.0; lmax + 1],
        }
    }

    pub fn lmax(&self) -> usize {
        self.legendre.lmax()
    }

    /// Fill `out[harmonic_index(l, m)]` with `Y_lm(point)`.
    pub fn fill(&mut self, point: SphericalPoint, out: &mut [f64]) {
        let lmax = self.lmax();
        debug_assert_eq!(out.len(), harmonic_count(lmax));
        self.legendre.evaluate(point.theta.cos());
        for m in 0..=lmax {
            let (s, c) = (m as f64 * point.phi).sin_cos();
            self.cos_m[m] = c;
            self.sin_m[m] = s;
        }
        let r2 = std::f64::consts::SQRT_2;
        for l in 0..=lmax {
            let base = l * l + l;
            out[base] = self.legendre.get(l, 0);
            for m in 1..=l {
                let p = r2 * self.legendre.get(l, m);
                out[base + m] = p * self.cos_m[m];
                out[base - m] = p * self.sin_m[m];
            }
        }
    }
}
