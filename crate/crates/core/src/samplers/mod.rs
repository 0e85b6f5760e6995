//! Reproducible random streams and log-domain Gamma/Dirichlet variates.
//!
//! A Dirichlet draw is produced by normalizing independent Gamma variates by
//! their sum. At shapes like `1/n²` those variates have logs around `-1e7`,
//! so every stage here (sampling, normalization, threshold counting) works
//! with natural logs and never exponentiates individual coordinates.

mod dirichlet;
mod gamma;
mod stream;

pub use dirichlet::{sample_dirichlet_log, sparsity_count, DirichletSpec, LogSimplexPoint};
pub use gamma::{sample_gamma_log, LogGamma, LogGammaSample, MAX_EXP_SAFE_NEG_LOG};
pub use stream::{derive_stream, RandomStream, StreamSeed};

use thiserror::Error;

use crate::special::SpecialError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplerError {
    #[error("invalid shape: {0}")]
    Shape(#[from] SpecialError),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("threshold epsilon = {0} is outside (0, 1]")]
    Epsilon(f64),
    #[error("log coordinates are not normalized: log-sum-exp = {0}")]
    NotNormalized(f64),
}
