//! Independent reference implementations shared by integration tests.
#![allow(dead_code)]

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sphere_cusum::harmonics::CoefficientPanel;

/// Random panel with per-series offsets and per-degree scales so that
/// no two multipoles look alike.
pub fn random_panel(seed: u64, lmax: usize, n_times: usize) -> CoefficientPanel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scales: Vec<f64> = (0..=lmax).map(|_| rng.random_range(0.2..3.0)).collect();
    CoefficientPanel::from_fn(lmax, n_times, |l, _, _| scales[l] * rng.random_range(-1.0..1.0) + 0.3)
}

/// `A(j / grid_r, k / grid_s)` from the definition. Centered partial sums
/// `Σ_m Σ_{t<=T} (β_lm(t) - μ̂_lm)` and `C̄_l` are computed in exact rational
/// arithmetic; only the final normalization and the sum over degrees are
/// done in floating point.
pub fn brute_force_surface(panel: &CoefficientPanel, lmin: usize, grid_r: usize, grid_s: usize) -> Vec<f64> {
    let (lmax, n) = (panel.lmax(), panel.n_times());
    let exact = |x: f64| BigRational::from_float(x).unwrap();
    let n_big = BigRational::from_integer(BigInt::from(n));
    let mut partial = vec![vec![0.0; n + 1]; lmax + 1];
    let mut cbar = vec![0.0; lmax + 1];
    for l in 0..=lmax {
        let mut sums = vec![BigRational::zero(); n + 1];
        let mut ss = BigRational::zero();
        for m in -(l as i32)..=(l as i32) {
            let xs: Vec<BigRational> = panel.series(l, m).iter().map(|v| exact(*v)).collect();
            let mu = xs.iter().fold(BigRational::zero(), |a, x| a + x) / &n_big;
            let mut run = BigRational::zero();
            for (t, x) in xs.iter().enumerate() {
                let d = x - &mu;
                ss += &d * &d;
                run += d;
                sums[t + 1] += &run;
            }
        }
        let denom = BigRational::from_integer(BigInt::from(n * (2 * l + 1)));
        cbar[l] = (ss / denom).to_f64().unwrap();
        for t in 0..=n {
            partial[l][t] = sums[t].to_f64().unwrap();
        }
    }
    let mut out = Vec::new();
    for j in 0..=grid_r {
        let c = lmax * j / grid_r;
        for k in 0..=grid_s {
            let tcut = n * k / grid_s;
            let mut total = 0.0;
            for l in lmin..=c {
                total += partial[l][tcut] / ((2 * l + 1) as f64 * cbar[l]).sqrt();
            }
            out.push(total / ((n * lmax) as f64).sqrt());
        }
    }
    out
}

/// Two-sample Kolmogorov–Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let en = (n * m / (n + m)).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let sign = if k % 2 == 1 { 2.0 } else { -2.0 };
        p += sign * (-2.0 * kf * kf * lambda * lambda).exp();
    }
    (d, p.clamp(0.0, 1.0))
}
