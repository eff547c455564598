//! Monte Carlo drivers: rejection-rate tables, the multiscale `lmin` scan
//! and the empirical covariance check against the pillowcase limit.

mod config;
mod covariance;
mod experiment;
mod scan;

pub use config::{ExperimentConfig, Hypothesis, QuantileSource};
pub use covariance::{covariance_check, CovarianceCheck, PointPair};
pub use experiment::{replicate_sups, run_rejection_experiment, RejectionTable};
pub use scan::{multiscale_scan, ScanEntry};
