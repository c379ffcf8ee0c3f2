//! Monte Carlo estimation of (association) Banzhaf indices with confidence
//! intervals and sample-size planning.

mod estimate;
mod interval;
pub mod quantile;
mod stream;

pub use estimate::{
    bernoulli_sample_variance, estimate_indices, estimate_indices_scoped, EstimateReport,
    PlayerEstimate,
};
pub use interval::{
    confidence_interval, default_selfbounding_b, halfwidth, required_samples, ConfidenceInterval,
    IntervalMethod,
};
pub use stream::{derived_seed, CoalitionStream};
