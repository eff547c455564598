use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sphere_cusum::harmonics::{analyze, build_gauss_grid, real_sph_harm, SphericalPoint};
use sphere_cusum::ingest::{
    annual_average, compute_anomalies, pipeline, read_latlon_csv, regrid_to_cubature, write_latlon_csv, LatLonSeries,
    MissingPolicy, ANNUAL,
};

fn axes(step: f64) -> (Vec<f64>, Vec<f64>) {
    let nlat = (180.0 / step).round() as usize + 1;
    let nlon = (360.0 / step).round() as usize;
    (
        (0..nlat).map(|i| -90.0 + step * i as f64).collect(),
        (0..nlon).map(|j| step * j as f64).collect(),
    )
}

fn monthly_csv(path: &Path, step: f64, years: std::ops::RangeInclusive<i32>, f: impl Fn(i32, u32, f64, f64) -> f64) {
    let (lats, lons) = axes(step);
    let mut w = std::io::BufWriter::new(std::fs::File::create(path).unwrap());
    writeln!(w, "year,month,lat,lon,value").unwrap();
    for year in years {
        for month in 1..=12 {
            for lat in &lats {
                for lon in &lons {
                    writeln!(w, "{year},{month},{lat},{lon},{:?}", f(year, month, *lat, *lon)).unwrap();
                }
            }
        }
    }
}

fn y20(lat: f64) -> f64 {
    let u = lat.to_radians().sin();
    (5.0 / (16.0 * PI)).sqrt() * (3.0 * u * u - 1.0)
}

fn seasonal(month: u32, lat: f64, lon: f64) -> f64 {
    10.0 + 5.0 * (month as f64 * PI / 6.0).cos() * lat.to_radians().sin() + 0.01 * lon
}

#[test]
fn csv_round_trip_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (lats, lons) = axes(30.0);
    let times: Vec<(i32, u32)> = (1..=12).map(|m| (1990, m)).chain([(1991, 1)]).collect();
    let values = (0..lats.len() * lons.len() * times.len())
        .map(|_| rng.random_range(-30.0..40.0))
        .collect();
    let s = LatLonSeries::new(lats, lons, times, values).unwrap();
    let path = dir.path().join("s.csv");
    write_latlon_csv(&path, &s).unwrap();
    assert_eq!(read_latlon_csv(&path, MissingPolicy::Fail).unwrap(), s);
}

fn random_monthly(seed: u64) -> LatLonSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lats, lons) = axes(45.0);
    let times: Vec<(i32, u32)> = (1980..=1986).flat_map(|y| (1..=12).map(move |m| (y, m))).collect();
    let values = (0..lats.len() * lons.len() * times.len())
        .map(|_| rng.random_range(-20.0..35.0))
        .collect();
    LatLonSeries::new(lats, lons, times, values).unwrap()
}

#[test]
fn base_period_monthly_means_vanish() {
    let s = random_monthly(4);
    let a = compute_anomalies(&s, 1981, 1984).unwrap();
    let n = s.n_cells();
    for month in 1..=12u32 {
        for c in 0..n {
            let vals: Vec<f64> = (1981..=1984)
                .map(|y| {
                    let t = s.times.iter().position(|x| *x == (y, month)).unwrap();
                    a.series.values[t * n + c]
                })
                .collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            assert!(mean.abs() <= 1e-10, "month {month} cell {c}: {mean}");
        }
    }
}

#[test]
fn anomalies_are_idempotent() {
    let s = random_monthly(5);
    let once = compute_anomalies(&s, 1980, 1985).unwrap();
    let twice = compute_anomalies(&once.series, 1980, 1985).unwrap();
    for (a, b) in once.series.values.iter().zip(&twice.series.values) {
        assert!((a - b).abs() <= 1e-10);
    }
}

/// Relative L2 error of the coefficients recovered after sampling a
/// degree-8 field on a 2.5° grid, regridding and analyzing.
fn band_limited_recovery(seed: u64, sd: impl Fn(usize) -> f64) -> f64 {
    let lmax = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefs: Vec<(usize, i32, f64)> = (0..=lmax)
        .flat_map(|l| (-(l as i32)..=l as i32).map(move |m| (l, m)))
        .map(|(l, m)| (l, m, sd(l) * rng.random_range(-1.0..1.0)))
        .collect();
    let field = |lat: f64, lon: f64| {
        let p = SphericalPoint::from_lat_lon_deg(lat, lon).unwrap();
        coefs
            .iter()
            .map(|(l, m, c)| c * real_sph_harm(*l, *m, p).unwrap())
            .sum::<f64>()
    };
    let (lats, lons) = axes(2.5);
    let mut values = Vec::new();
    for lat in &lats {
        for lon in &lons {
            values.push(field(*lat, *lon));
        }
    }
    let s = LatLonSeries::new(lats, lons, vec![(2000, ANNUAL)], values).unwrap();
    let snap = regrid_to_cubature(&s, Arc::new(build_gauss_grid(32))).unwrap();
    let panel = analyze(&snap, lmax).unwrap();
    let norm = coefs.iter().map(|(_, _, c)| c * c).sum::<f64>().sqrt();
    let err = coefs
        .iter()
        .map(|(l, m, c)| (panel.get(*l, *m, 0) - c).powi(2))
        .sum::<f64>()
        .sqrt();
    err / norm
}

#[test]
fn band_limited_field_is_recovered() {
    // Coefficients with the default model spectrum; bilinear damping grows
    // like l², so a flat spectrum up to l = 8 sits near 6e-3 instead.
    let spectrum = sphere_cusum::fields::AngularPowerSpectrum::default();
    for seed in 0..3 {
        let rel = band_limited_recovery(seed, |l| spectrum.cl(l).sqrt());
        assert!(rel <= 5e-3, "relative error {rel}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn monotone_field_stays_monotone_along_meridians(
        steps in proptest::collection::vec(0.0f64..1.0, 19),
        lon_noise in proptest::collection::vec(-0.2f64..0.2, 36),
    ) {
        // Increasing northwards in every column, with a longitude-dependent shift.
        let (lats, lons) = axes(10.0);
        let profile: Vec<f64> = steps.iter().scan(0.0, |acc, s| { *acc += s; Some(*acc) }).collect();
        let mut values = Vec::new();
        for p in &profile {
            for noise in &lon_noise {
                values.push(p + noise);
            }
        }
        let s = LatLonSeries::new(lats, lons, vec![(2000, ANNUAL)], values).unwrap();
        let grid = Arc::new(build_gauss_grid(12));
        let snap = regrid_to_cubature(&s, grid.clone()).unwrap();
        let n_phi = 2 * 12 + 2;
        for j in 0..n_phi {
            let column: Vec<(f64, f64)> = (0..13).map(|i| {
                let k = i * n_phi + j;
                (grid.points()[k].theta, snap.samples()[k])
            }).collect();
            for w in column.windows(2) {
                prop_assert!(w[0].0 < w[1].0);
                prop_assert!(w[1].1 <= w[0].1 + 1e-12);
            }
        }
    }
}

#[test]
fn annual_average_of_anomalies_drops_partial_years() {
    let mut s = random_monthly(7);
    let n = s.n_cells();
    s.times.truncate(s.times.len() - 3);
    s.values.truncate(s.times.len() * n);
    let a = compute_anomalies(&s, 1980, 1983).unwrap();
    let (yearly, warnings) = annual_average(&a);
    assert_eq!(yearly.series.times.len(), 6);
    assert_eq!(warnings.len(), 1);
    assert_eq!(warnings[0].year, 1986);
    assert_eq!(warnings[0].months_present, (1..=9).collect::<Vec<u32>>());
}

#[test]
fn trending_quadrupole_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("globe.csv");
    monthly_csv(&path, 2.5, 2000..=2005, |year, month, lat, lon| {
        seasonal(month, lat, lon) + y20(lat) * (year - 2000) as f64
    });
    let out = pipeline(&path, (2000, 2005), 6, 16, MissingPolicy::Fail).unwrap();
    assert_eq!(out.years, (2000..=2005).collect::<Vec<_>>());
    let p = &out.panel;
    let series = p.series(2, 0);
    let peak = series.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let slopes: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    for s in &slopes {
        assert!((s - 1.0).abs() <= 1e-3, "slope {s}");
    }
    for l in 0..=6usize {
        for m in -(l as i32)..=(l as i32) {
            if (l, m) == (2, 0) {
                continue;
            }
            for v in p.series(l, m) {
                assert!(v.abs() <= 1e-3 * peak, "({l},{m}) = {v}");
            }
        }
    }
}

#[test]
fn constant_field_gives_zero_panel() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    monthly_csv(&path, 30.0, 1990..=1992, |_, _, _, _| 12.5);
    let out = pipeline(&path, (1991, 1992), 4, 8, MissingPolicy::Fail).unwrap();
    assert!(out.panel.values().iter().all(|v| *v == 0.0));
}

#[test]
fn pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    monthly_csv(&path, 15.0, 1990..=1993, |y, m, lat, lon| {
        seasonal(m, lat, lon) + ((y * 7 + m as i32) % 5) as f64 * lat.to_radians().cos()
    });
    let a = pipeline(&path, (1990, 1992), 5, 10, MissingPolicy::Fail).unwrap();
    let b = pipeline(&path, (1990, 1992), 5, 10, MissingPolicy::Fail).unwrap();
    let bits =
        |p: &sphere_cusum::harmonics::CoefficientPanel| p.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.panel), bits(&b.panel));
}

#[test]
fn pipeline_rejects_order_above_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    monthly_csv(&path, 30.0, 1990..=1990, |_, _, _, _| 1.0);
    assert!(pipeline(&path, (1990, 1990), 10, 8, MissingPolicy::Fail)
        .unwrap_err()
        .is_usage());
}
