//! Associated Legendre functions.
//!
//! Two flavours live here. [`assoc_legendre`] returns the classical,
//! unnormalized `P_lm(u)` of the Rodrigues formula (no Condon–Shortley
//! phase). [`NormalizedLegendre`] tabulates the orthonormalized functions
//!
//! ```text
//! Pn_lm(u) = sqrt((2l+1)/(4π) · (l-m)!/(l+m)!) · P_lm(u)
//! ```
//!
//! with the factorial ratio folded into the recurrence coefficients so that
//! nothing overflows for large `l`.

use crate::error::{Error, Result};

/// Unnormalized associated Legendre function `P_lm(u)`, without the
/// Condon–Shortley phase.
///
/// Evaluated by upward recurrence in `l` from the closed form
/// `P_mm(u) = (2m-1)!! (1-u²)^{m/2}`. Values grow factorially with `m`, so
/// for large orders prefer [`NormalizedLegendre`].
///
/// ```
/// use sphere_cusum::harmonics::assoc_legendre;
/// let p = assoc_legendre(2, 1, 0.2).unwrap();
/// assert!((p - 3.0 * 0.2 * (1.0f64 - 0.04).sqrt()).abs() < 1e-15);
/// ```
pub fn assoc_legendre(ell: usize, m: i32, u: f64) -> Result<f64> {
    if m < 0 || m as usize > ell {
        return Err(Error::domain(format!(
            "associated Legendre order m = {m} outside [0, {ell}]"
        )));
    }
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("argument u = {u} outside [-1, 1]")));
    }
    let m = m as usize;
    let s = ((1.0 - u) * (1.0 + u)).sqrt();

    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= (2 * k - 1) as f64 * s;
    }
    if ell == m {
        return Ok(pmm);
    }

    let mut prev = pmm;
    let mut cur = (2 * m + 1) as f64 * u * pmm;
    for l in (m + 2)..=ell {
        let next = ((2 * l - 1) as f64 * u * cur - (l + m - 1) as f64 * prev) / (l - m) as f64;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[inline]
pub(crate) fn tri_index(ell: usize, m: usize) -> usize {
    ell * (ell + 1) / 2 + m
}

/// Table of orthonormalized associated Legendre values `Pn_lm(u)` for
/// `0 <= m <= l <= lmax` at a single argument.
#[derive(Debug, Clone)]
pub struct NormalizedLegendre {
    lmax: usize,
    values: Vec<f64>,
}

impl NormalizedLegendre {
    pub fn new(lmax: usize) -> Self {
        NormalizedLegendre {
            lmax,
            values: vec![0.0; tri_index(lmax, lmax) + 1],
        }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    /// Recompute the whole table at `u` (assumed in `[-1, 1]`).
    pub fn evaluate(&mut self, u: f64) {
        let lmax = self.lmax;
        let s = ((1.0 - u) * (1.0 + u)).max(0.0).sqrt();
        let v = &mut self.values;

        let mut pmm = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
        for m in 0..=lmax {
            if m > 0 {
                pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
            }
            v[tri_index(m, m)] = pmm;
            if m == lmax {
                break;
            }
            let mut prev = pmm;
            let mut cur = ((2 * m + 3) as f64).sqrt() * u * pmm;
            v[tri_index(m + 1, m)] = cur;
            let mf = m as f64;
            for l in (m + 2)..=lmax {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let lm1 = lf - 1.0;
                let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
                let next = a * (u * cur - b * prev);
                v[tri_index(l, m)] = next;
                prev = cur;
                cur = next;
            }
        }
    }

    #[inline]
    pub fn get(&self, ell: usize, m: usize) -> f64 {
        self.values[tri_index(ell, m)]
    }
}
