//! Monte Carlo harness: trial generation, quantile curves, statistical
//! verdicts against the closed-form bounds, and numeric checks of the
//! individual inequalities the bounds are assembled from.

mod config;
mod figure;
pub mod proofs;
mod quantiles;
pub mod stats;
mod trials;
mod verdict;

pub use config::{AlphaMode, ExperimentConfig};
pub use figure::{run_experiment, ExperimentReport};
pub use quantiles::{quantile_curves, quantile_type7, QuantileCurve};
pub use trials::{pair_index, run_cell, run_trials, ThresholdCount, TrialRecord};
pub use verdict::{
    claims_for, rerun_master, verify_bound, verify_with_rerun, BoundClaim, BoundVerdict,
    CellSample, RERUN_FACTOR,
};

use thiserror::Error;

use crate::bounds::BoundError;
use crate::samplers::SamplerError;
use crate::special::SpecialError;

/// Absolute slack allowed for floating-point error in every verdict and
/// proof-step comparison.
pub const NUMERIC_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid experiment configuration: {0}")]
    Config(String),
    #[error("sampling failed for n = {n}, trial {trial}: {source}")]
    Sampling {
        n: usize,
        trial: u64,
        #[source]
        source: SamplerError,
    },
    #[error("no records for n = {n}, exponent = {exponent}")]
    EmptyCell { n: usize, exponent: f64 },
    #[error("records and claim disagree: {0}")]
    Mismatch(String),
    #[error("claim '{0}' does not meet its preconditions")]
    Inapplicable(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
