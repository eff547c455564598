//! Angular power spectra, mean scenarios and coefficient-panel simulation.

mod scenario;
mod simulate;
mod spectrum;
mod temporal;

pub use scenario::{scenario_preset, MeanScenario, MeanTerm, SecondaryTrend};
pub use simulate::{simulate_panel, PanelModel};
pub use spectrum::{AngularPowerSpectrum, SpectrumRule};
pub use temporal::{TemporalModel, MAX_AR_COEFFICIENT};
