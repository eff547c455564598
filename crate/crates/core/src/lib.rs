//! Sup-CUSUM stationarity tests for spherical random fields observed over time.
//!
//! A sequence of maps on the sphere is expanded in real spherical harmonics;
//! the CUSUM of each coefficient series, normalized by the sample angular
//! power spectrum, gives a two-parameter surface whose supremum is compared
//! against quantiles of the pillowcase process.
//!
//! ```
//! use sphere_cusum::fields::{simulate_panel, AngularPowerSpectrum, MeanScenario, TemporalModel};
//! use sphere_cusum::cusum::{decide, statistic_surface, sup_statistic};
//! use sphere_cusum::pillowcase::QuantileTable;
//!
//! let panel = simulate_panel(
//!     &AngularPowerSpectrum::inverse_laplacian(1.0),
//!     &TemporalModel::Iid,
//!     &MeanScenario::empty(),
//!     60,
//!     8,
//!     7,
//! )
//! .unwrap();
//! let surface = statistic_surface(&panel, 0, 60, 60).unwrap();
//! let sup = sup_statistic(&surface);
//! let decision = decide(sup, &QuantileTable::published(), 0.95).unwrap();
//! assert_eq!(decision.reject, sup > 1.4142);
//! ```

pub mod cusum;
pub mod error;
pub mod fields;
pub mod harmonics;
pub mod harness;
pub mod ingest;
pub mod io;
pub mod pillowcase;
pub mod rng;
pub mod special;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/harmonics.md")]
    mod harmonics {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/cusum.md")]
    mod cusum {}
    #[doc = include_str!("../../../book/src/pillowcase.md")]
    mod pillowcase {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/ingest.md")]
    mod ingest {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
