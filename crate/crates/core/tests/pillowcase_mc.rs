mod support;

use sphere_cusum::pillowcase::{
    estimate_quantiles, pillowcase_covariance, sample_bm, sample_bridge, sample_pillowcase, sample_pillowcase_wishart,
    sample_sups, SupSampler,
};
use sphere_cusum::rng::substream;
use support::ks_two_sample;

const DRAWS: usize = 20000;

fn moment_check(name: &str, est: f64, target: f64, sd: f64, draws: usize) {
    let se = sd / (draws as f64).sqrt();
    assert!((est - target).abs() < 5.0 * se, "{name}: {est} vs {target} (se {se})");
}

#[test]
fn brownian_motion_covariance() {
    let grid = 10;
    let mut rng = substream(1, 0);
    let paths: Vec<Vec<f64>> = (0..DRAWS).map(|_| sample_bm(grid, &mut rng)).collect();
    for (j, k) in [(3usize, 3usize), (3, 7), (10, 10), (5, 10)] {
        let est = paths.iter().map(|p| p[j] * p[k]).sum::<f64>() / DRAWS as f64;
        let (s, t) = (j as f64 / 10.0, k as f64 / 10.0);
        // Var(B_s B_t) = s t + (s ∧ t)².
        let sd = (s * t + s.min(t).powi(2)).sqrt();
        moment_check("bm", est, s.min(t), sd, DRAWS);
    }
    let mean_end = paths.iter().map(|p| p[grid]).sum::<f64>() / DRAWS as f64;
    moment_check("bm mean", mean_end, 0.0, 1.0, DRAWS);
}

#[test]
fn brownian_bridge_covariance() {
    let grid = 10;
    let mut rng = substream(2, 0);
    let paths: Vec<Vec<f64>> = (0..DRAWS).map(|_| sample_bridge(grid, &mut rng)).collect();
    assert!(paths.iter().all(|p| p[0] == 0.0 && p[grid] == 0.0));
    for (j, k) in [(5usize, 5usize), (2, 8), (1, 9)] {
        let est = paths.iter().map(|p| p[j] * p[k]).sum::<f64>() / DRAWS as f64;
        let (s, t) = (j as f64 / 10.0, k as f64 / 10.0);
        let target = s.min(t) - s * t;
        let sd = (s * (1.0 - s) * t * (1.0 - t) + target * target).sqrt();
        moment_check("bridge", est, target, sd, DRAWS);
    }
}

fn pillowcase_moments(wishart: bool) {
    let (grid, inner_n, draws) = (10, 40, 8000);
    let pts = [
        ((1.0, 0.5), (1.0, 0.5)),
        ((0.5, 0.5), (1.0, 0.5)),
        ((0.3, 0.2), (0.7, 0.6)),
    ];
    let mut sums = [0.0; 3];
    for b in 0..draws {
        let mut rng = substream(if wishart { 4 } else { 3 }, b as u64);
        let w = if wishart {
            sample_pillowcase_wishart(grid, inner_n, &mut rng)
        } else {
            sample_pillowcase(grid, inner_n, &mut rng)
        };
        let at = |(r, s): (f64, f64)| w.get((r * 10.0f64).round() as usize, (s * 10.0f64).round() as usize);
        for (acc, (p, q)) in sums.iter_mut().zip(pts) {
            *acc += at(p) * at(q);
        }
    }
    for (acc, (p, q)) in sums.iter().zip(pts) {
        let target = pillowcase_covariance(p.0, p.1, q.0, q.1);
        let vp = pillowcase_covariance(p.0, p.1, p.0, p.1);
        let vq = pillowcase_covariance(q.0, q.1, q.0, q.1);
        // Product of jointly Gaussian variables: Var = vp vq + cov².
        let sd = (vp * vq + target * target).sqrt();
        moment_check(
            if wishart { "wishart" } else { "direct" },
            acc / draws as f64,
            target,
            sd,
            draws,
        );
    }
}

#[test]
fn direct_pillowcase_covariance() {
    pillowcase_moments(false);
}

#[test]
fn wishart_pillowcase_covariance() {
    pillowcase_moments(true);
}

#[test]
fn direct_and_wishart_sups_agree_in_law() {
    let (a, _) = sample_sups(20, 60, 3000, 5, SupSampler::Direct).unwrap();
    let (b, _) = sample_sups(20, 60, 3000, 6, SupSampler::Wishart).unwrap();
    let (d, p) = ks_two_sample(&a, &b);
    assert!(p > 1e-3, "KS distance {d}, p-value {p}");
}

#[test]
fn ks_detects_a_shift() {
    let (a, _) = sample_sups(20, 60, 2000, 5, SupSampler::Direct).unwrap();
    let b: Vec<f64> = a.iter().map(|x| x * 1.1).collect();
    assert!(ks_two_sample(&a, &b).1 < 1e-6);
}

#[test]
fn quantile_estimation_is_reproducible() {
    let levels = [0.9, 0.95, 0.99];
    let a = estimate_quantiles(30, 100, 200, &levels, 8, SupSampler::Auto).unwrap();
    let b = estimate_quantiles(30, 100, 200, &levels, 8, SupSampler::Auto).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.sampler(), SupSampler::Wishart);
    let c = estimate_quantiles(30, 100, 200, &levels, 9, SupSampler::Auto).unwrap();
    assert_ne!(a.thresholds(), c.thresholds());
}
