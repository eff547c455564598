//! The two-parameter studentized CUSUM statistic and the test decision.

mod decision;
mod spectrum;
mod surface;

pub use decision::{decide, Decision};
pub(crate) use spectrum::series_mean;
pub use spectrum::{harmonic_averages, sample_power_spectrum, HarmonicAverages, SamplePowerSpectrum};
pub use surface::{statistic_surface, sup_statistic, CusumPartialSums, StatisticSurface, SurfaceMeta};
