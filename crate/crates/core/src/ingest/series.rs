use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Month value used for time steps that are annual means.
pub const ANNUAL: u32 = 0;

/// What to do with cells that are absent or `NaN` in the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    #[default]
    Fail,
    /// Copy the value of the nearest present cell (great-circle distance)
    /// in the same time step.
    NearestNeighbor,
}

/// Gridded values on a regular latitude-longitude grid.
///
/// Latitudes are ascending degrees in `[-90, 90]`, longitudes ascending
/// degrees in `[0, 360)`. `times` holds `(year, month)` pairs in
/// chronological order; `month == ANNUAL` marks yearly means. Values are
/// time-major: `values[(t * lats.len() + i) * lons.len() + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatLonSeries {
    pub lats: Vec<f64>,
    pub lons: Vec<f64>,
    pub times: Vec<(i32, u32)>,
    pub values: Vec<f64>,
}

impl LatLonSeries {
    /// Build a series from axes and values, checking shape and spacing.
    pub fn new(lats: Vec<f64>, lons: Vec<f64>, times: Vec<(i32, u32)>, values: Vec<f64>) -> Result<Self> {
        if lats.is_empty() || lons.is_empty() || times.is_empty() {
            return Err(Error::invalid("series needs at least one latitude, longitude and time"));
        }
        if values.len() != lats.len() * lons.len() * times.len() {
            return Err(Error::invalid(format!(
                "expected {} values, got {}",
                lats.len() * lons.len() * times.len(),
                values.len()
            )));
        }
        if lats.iter().any(|l| !(-90.0..=90.0).contains(l)) {
            return Err(Error::invalid("latitudes must lie in [-90, 90]"));
        }
        if lons.iter().any(|l| !(0.0..360.0).contains(l)) {
            return Err(Error::invalid("longitudes must lie in [0, 360)"));
        }
        check_regular("lat", &lats)?;
        check_regular("lon", &lons)?;
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("times must be strictly increasing"));
        }
        Ok(LatLonSeries {
            lats,
            lons,
            times,
            values,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.lats.len() * self.lons.len()
    }

    /// Values at time step `t`, latitude-major.
    pub fn slice(&self, t: usize) -> &[f64] {
        let n = self.n_cells();
        &self.values[t * n..(t + 1) * n]
    }

    pub fn get(&self, t: usize, i: usize, j: usize) -> f64 {
        self.values[(t * self.lats.len() + i) * self.lons.len() + j]
    }

    /// Longitudes wrap all the way round the globe.
    pub fn is_global(&self) -> bool {
        let n = self.lons.len();
        if n == 1 {
            return false;
        }
        let step = self.lons[1] - self.lons[0];
        (step * n as f64 - 360.0).abs() < 1e-6
    }
}

fn check_regular(axis: &'static str, values: &[f64]) -> Result<()> {
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::IrregularGrid {
            axis,
            message: "values must be strictly increasing".into(),
        });
    }
    if values.len() < 3 {
        return Ok(());
    }
    let step = values[1] - values[0];
    for (k, w) in values.windows(2).enumerate() {
        if ((w[1] - w[0]) - step).abs() > 1e-6 * step.max(1.0) {
            return Err(Error::IrregularGrid {
                axis,
                message: format!(
                    "step {} between {} and {} differs from {}",
                    w[1] - w[0],
                    values[k],
                    values[k + 1],
                    step
                ),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct Row {
    year: i32,
    month: u32,
    lat: f64,
    lon: f64,
    value: Option<f64>,
}

fn key(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

fn schema(path: &Path, message: String) -> Error {
    Error::Schema {
        context: path.display().to_string(),
        message,
    }
}

/// Read a CSV with header `year,month,lat,lon,value`, rows in any order.
///
/// Empty or `NaN` values and absent cells are missing; they are an error
/// under [`MissingPolicy::Fail`].
pub fn read_latlon_csv(path: &Path, policy: MissingPolicy) -> Result<LatLonSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(File::open(path).map_err(|e| Error::io(path, e))?);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["year", "month", "lat", "lon", "value"] {
        return Err(schema(
            path,
            format!("expected header year,month,lat,lon,value, found {headers:?}"),
        ));
    }
    let mut rows = Vec::new();
    for (k, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| schema(path, format!("row {}: {e}", k + 2)))?;
        if !(1..=12).contains(&row.month) {
            return Err(schema(
                path,
                format!("row {}: month {} outside 1..=12", k + 2, row.month),
            ));
        }
        if !(-90.0..=90.0).contains(&row.lat) || !row.lon.is_finite() {
            return Err(schema(
                path,
                format!("row {}: coordinates ({}, {}) out of range", k + 2, row.lat, row.lon),
            ));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(schema(path, "no data rows".into()));
    }

    let mut lat_axis = BTreeMap::new();
    let mut lon_axis = BTreeMap::new();
    let mut time_axis = BTreeMap::new();
    for r in &mut rows {
        r.lon = r.lon.rem_euclid(360.0);
        if key(r.lon) == key(360.0) {
            r.lon = 0.0;
        }
        lat_axis.entry(key(r.lat)).or_insert(r.lat);
        lon_axis.entry(key(r.lon)).or_insert(r.lon);
        time_axis.entry((r.year, r.month)).or_insert(());
    }
    let lats: Vec<f64> = lat_axis.values().copied().collect();
    let lons: Vec<f64> = lon_axis.values().copied().collect();
    let times: Vec<(i32, u32)> = time_axis.keys().copied().collect();
    check_regular("lat", &lats)?;
    check_regular("lon", &lons)?;

    let lat_idx: BTreeMap<i64, usize> = lat_axis.keys().enumerate().map(|(i, k)| (*k, i)).collect();
    let lon_idx: BTreeMap<i64, usize> = lon_axis.keys().enumerate().map(|(i, k)| (*k, i)).collect();
    let time_idx: BTreeMap<(i32, u32), usize> = times.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let (nlat, nlon) = (lats.len(), lons.len());
    let mut values = vec![f64::NAN; times.len() * nlat * nlon];
    let mut seen = vec![false; values.len()];
    for r in &rows {
        let idx = (time_idx[&(r.year, r.month)] * nlat + lat_idx[&key(r.lat)]) * nlon + lon_idx[&key(r.lon)];
        if seen[idx] {
            return Err(schema(
                path,
                format!("duplicate cell {}-{:02} lat {} lon {}", r.year, r.month, r.lat, r.lon),
            ));
        }
        seen[idx] = true;
        values[idx] = r.value.unwrap_or(f64::NAN);
    }

    let mut series = LatLonSeries::new(lats, lons, times, values)?;
    fill_missing(&mut series, policy)?;
    Ok(series)
}

fn fill_missing(series: &mut LatLonSeries, policy: MissingPolicy) -> Result<()> {
    let (nlat, nlon) = (series.lats.len(), series.lons.len());
    let n = nlat * nlon;
    let unit = |c: usize| {
        let (lat, lon) = (series.lats[c / nlon].to_radians(), series.lons[c % nlon].to_radians());
        [lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()]
    };
    let units: Vec<[f64; 3]> = (0..n).map(unit).collect();
    for t in 0..series.times.len() {
        let slice = &series.values[t * n..(t + 1) * n];
        let missing: Vec<usize> = (0..n).filter(|&c| !slice[c].is_finite()).collect();
        let Some(&first) = missing.first() else { continue };
        let (year, month) = series.times[t];
        let cell_error = |c: usize| Error::MissingCell {
            year,
            month,
            lat: series.lats[c / nlon],
            lon: series.lons[c % nlon],
        };
        if policy == MissingPolicy::Fail || missing.len() == n {
            return Err(cell_error(first));
        }
        let present: Vec<usize> = (0..n).filter(|&c| slice[c].is_finite()).collect();
        let fills: Vec<(usize, f64)> = missing
            .iter()
            .map(|&c| {
                let u = units[c];
                let nearest = present
                    .iter()
                    .copied()
                    .max_by(|&a, &b| {
                        let da = dot(u, units[a]);
                        let db = dot(u, units[b]);
                        da.total_cmp(&db).then(b.cmp(&a))
                    })
                    .unwrap();
                (c, slice[nearest])
            })
            .collect();
        for (c, v) in fills {
            series.values[t * n + c] = v;
        }
    }
    Ok(())
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Write a series in the format accepted by [`read_latlon_csv`].
pub fn write_latlon_csv(path: &Path, series: &LatLonSeries) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let err = |e| Error::io(path, e);
    writeln!(w, "year,month,lat,lon,value").map_err(err)?;
    for (t, (year, month)) in series.times.iter().enumerate() {
        for (i, lat) in series.lats.iter().enumerate() {
            for (j, lon) in series.lons.iter().enumerate() {
                writeln!(w, "{year},{month},{lat:?},{lon:?},{:?}", series.get(t, i, j)).map_err(err)?;
            }
        }
    }
    w.flush().map_err(err)
}
