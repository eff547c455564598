use std::sync::Arc;

use rayon::prelude::*;

use super::series::LatLonSeries;
use crate::error::{Error, Result};
use crate::harmonics::{CubatureGrid, FieldSnapshot};

#[derive(Debug, Clone, Copy)]
struct Stencil {
    lat: (usize, usize, f64),
    lon: (usize, usize, f64),
}

fn bracket(x: f64, start: f64, step: f64, len: usize) -> (usize, usize, f64) {
    if len == 1 || x <= start {
        return (0, 0, 0.0);
    }
    let pos = (x - start) / step;
    if pos >= (len - 1) as f64 {
        return (len - 1, len - 1, 0.0);
    }
    let i = pos.floor() as usize;
    (i, i + 1, pos - i as f64)
}

fn stencil(series: &LatLonSeries, theta: f64, phi: f64) -> Stencil {
    let lat = 90.0 - theta.to_degrees();
    let nlat = series.lats.len();
    let dlat = if nlat > 1 { series.lats[1] - series.lats[0] } else { 1.0 };
    let nlon = series.lons.len();
    let dlon = 360.0 / nlon as f64;
    let x = (phi.to_degrees() - series.lons[0]).rem_euclid(360.0) / dlon;
    let j = (x.floor() as usize).min(nlon - 1);
    Stencil {
        lat: bracket(lat, series.lats[0], dlat, nlat),
        lon: (j, (j + 1) % nlon, x - j as f64),
    }
}

/// Bilinear interpolation of each time step onto the nodes of `grid`.
///
/// Longitudes wrap; latitudes beyond the outermost data rows are clamped.
pub fn regrid_to_cubature(series: &LatLonSeries, grid: Arc<CubatureGrid>) -> Result<FieldSnapshot> {
    if !series.is_global() {
        return Err(Error::invalid("longitude axis does not cover the full circle"));
    }
    let stencils: Vec<Stencil> = grid.points().iter().map(|p| stencil(series, p.theta, p.phi)).collect();
    let nlon = series.lons.len();
    let maps: Vec<Vec<f64>> = (0..series.times.len())
        .into_par_iter()
        .map(|t| {
            let slice = series.slice(t);
            let at = |i: usize, j: usize| slice[i * nlon + j];
            stencils
                .iter()
                .map(|s| {
                    let (i0, i1, u) = s.lat;
                    let (j0, j1, v) = s.lon;
                    let south = at(i0, j0) + v * (at(i0, j1) - at(i0, j0));
                    let north = at(i1, j0) + v * (at(i1, j1) - at(i1, j0));
                    south + u * (north - south)
                })
                .collect()
        })
        .collect();
    FieldSnapshot::new(grid, series.times.len(), maps.concat())
}
