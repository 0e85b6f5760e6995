use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gamma::LogGamma;
use super::SamplerError;
use crate::logspace::log_sum_exp;
use crate::special::Shape;

/// Tolerance on `|log-sum-exp(log_coords)|` for a normalized point.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Symmetric Dirichlet `Dir(alpha)` over `n` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirichletSpec {
    n: usize,
    alpha: Shape,
}

impl DirichletSpec {
    pub fn new(n: usize, alpha: Shape) -> Result<Self, SamplerError> {
        if n == 0 {
            return Err(SamplerError::ZeroDimension);
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> Shape {
        self.alpha
    }
}

/// A point of the probability simplex stored as per-coordinate natural logs.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSimplexPoint {
    log_coords: Vec<f64>,
}

impl LogSimplexPoint {
    /// Wraps already-normalized log coordinates.
    pub fn from_log_coords(log_coords: Vec<f64>) -> Result<Self, SamplerError> {
        if log_coords.is_empty() {
            return Err(SamplerError::ZeroDimension);
        }
        let total = log_sum_exp(&log_coords);
        if total.is_nan() || total.abs() > NORMALIZATION_TOLERANCE {
            return Err(SamplerError::NotNormalized(total));
        }
        Ok(Self { log_coords })
    }

    /// Normalizes arbitrary log weights by subtracting their log-sum-exp.
    pub fn normalize(mut log_weights: Vec<f64>) -> Result<Self, SamplerError> {
        if log_weights.is_empty() {
            return Err(SamplerError::ZeroDimension);
        }
        let total = log_sum_exp(&log_weights);
        if !total.is_finite() {
            return Err(SamplerError::NotNormalized(total));
        }
        for v in &mut log_weights {
            *v -= total;
        }
        Ok(Self {
            log_coords: log_weights,
        })
    }

    pub fn uniform(n: usize) -> Result<Self, SamplerError> {
        if n == 0 {
            return Err(SamplerError::ZeroDimension);
        }
        Ok(Self {
            log_coords: vec![-(n as f64).ln(); n],
        })
    }

    pub fn n(&self) -> usize {
        self.log_coords.len()
    }

    pub fn log_coords(&self) -> &[f64] {
        &self.log_coords
    }

    /// `|{i : ln X_i >= ln_epsilon}|`.
    pub fn count_at_or_above_ln(&self, ln_epsilon: f64) -> usize {
        self.log_coords.iter().filter(|&&l| l >= ln_epsilon).count()
    }
}

/// Draws `Dir(alpha)` as `Y_i / Σ Y_j` with `Y_i` i.i.d. Gamma(alpha), in logs.
pub fn sample_dirichlet_log<R: Rng + ?Sized>(rng: &mut R, spec: &DirichletSpec) -> LogSimplexPoint {
    let sampler = LogGamma::new(spec.alpha);
    let logs: Vec<f64> = (0..spec.n)
        .map(|_| sampler.sample(rng).log_value())
        .collect();
    // all entries are finite, so the log-sum-exp is finite and >= the max
    LogSimplexPoint::normalize(logs).expect("finite gamma logs normalize")
}

/// Number of coordinates with `X_i >= epsilon`, compared in log domain.
pub fn sparsity_count(point: &LogSimplexPoint, epsilon: f64) -> Result<usize, SamplerError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(SamplerError::Epsilon(epsilon));
    }
    Ok(point.count_at_or_above_ln(epsilon.ln()))
}
