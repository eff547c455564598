//! The Brownian pillowcase: sampling and sup-norm quantile calibration.

mod paths;
mod quantiles;

pub use paths::{
    pillowcase_covariance, sample_bm, sample_bridge, sample_pillowcase, sample_pillowcase_wishart, PillowcaseDraw,
};
pub use quantiles::{estimate_quantiles, order_statistic_rank, sample_sups, QuantileTable, SupSampler, MIN_DRAWS};
