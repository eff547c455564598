//! Gridded temperature ingestion: monthly lat-lon CSV to anomaly panel.

mod anomalies;
mod regrid;
mod series;

use std::path::Path;
use std::sync::Arc;

pub use anomalies::{annual_average, compute_anomalies, AnomalySeries, IngestWarning};
pub use regrid::regrid_to_cubature;
pub use series::{read_latlon_csv, write_latlon_csv, LatLonSeries, MissingPolicy, ANNUAL};

use crate::error::{Error, Result};
use crate::harmonics::{analyze, build_gauss_grid, CoefficientPanel};

/// Result of [`pipeline`].
#[derive(Debug, Clone)]
pub struct IngestOutput {
    pub panel: CoefficientPanel,
    /// Complete years, one per panel time step.
    pub years: Vec<i32>,
    pub warnings: Vec<IngestWarning>,
}

/// Read, take anomalies against `base`, average to years, regrid onto the
/// Gauss grid of order `lstar` and analyze up to `lmax`.
pub fn pipeline(
    path: &Path,
    base: (i32, i32),
    lmax: usize,
    lstar: usize,
    policy: MissingPolicy,
) -> Result<IngestOutput> {
    if lmax > lstar {
        return Err(Error::AliasingOrder { lmax, order: lstar });
    }
    let series = read_latlon_csv(path, policy)?;
    let anomalies = compute_anomalies(&series, base.0, base.1)?;
    let (annual, warnings) = annual_average(&anomalies);
    if annual.series.times.is_empty() {
        return Err(Error::invalid("no complete years in input"));
    }
    for w in &warnings {
        log::warn!("{}", w.to_json_line());
    }
    let grid = Arc::new(build_gauss_grid(lstar));
    let snapshot = regrid_to_cubature(&annual.series, grid)?;
    let panel = analyze(&snapshot, lmax)?;
    Ok(IngestOutput {
        panel,
        years: annual.series.times.iter().map(|(y, _)| *y).collect(),
        warnings,
    })
}
