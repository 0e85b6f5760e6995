use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ExperimentError, Result};
use crate::special::Shape;

/// How the Dirichlet shape depends on the dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMode {
    /// α = 1/n
    InverseN,
    /// α = 1/n²
    InverseNSquared,
    Fixed(f64),
}

impl AlphaMode {
    pub fn shape_for(&self, n: usize) -> Result<Shape> {
        let nf = n as f64;
        let alpha = match *self {
            AlphaMode::InverseN => nf.recip(),
            AlphaMode::InverseNSquared => (nf * nf).recip(),
            AlphaMode::Fixed(a) => a,
        };
        Shape::new(alpha).map_err(|e| ExperimentError::Config(format!("alpha for n = {n}: {e}")))
    }
}

impl fmt::Display for AlphaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaMode::InverseN => f.write_str("inverse_n"),
            AlphaMode::InverseNSquared => f.write_str("inverse_n_squared"),
            AlphaMode::Fixed(a) => write!(f, "fixed:{a}"),
        }
    }
}

impl FromStr for AlphaMode {
    type Err = ExperimentError;

    /// Accepts `inverse_n`, `inverse_n_squared`, `fixed:<value>` or a bare
    /// number; hyphens may replace underscores.
    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().replace('-', "_");
        match normalized.as_str() {
            "inverse_n" => return Ok(AlphaMode::InverseN),
            "inverse_n_squared" => return Ok(AlphaMode::InverseNSquared),
            _ => {}
        }
        let value = normalized.strip_prefix("fixed:").unwrap_or(&normalized);
        let a: f64 = value
            .parse()
            .map_err(|_| ExperimentError::Config(format!("unknown alpha mode '{s}'")))?;
        Shape::new(a).map_err(|e| ExperimentError::Config(format!("alpha mode '{s}': {e}")))?;
        Ok(AlphaMode::Fixed(a))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub alpha_mode: AlphaMode,
    /// Strictly increasing dimensions.
    pub n_grid: Vec<usize>,
    /// Strictly increasing exponents `c`; thresholds are `ε = n^-c`.
    pub threshold_exponents: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    /// Powers of two 16..=4096, exponents 1..=4, 1000 trials.
    pub fn figure_default(alpha_mode: AlphaMode) -> Self {
        Self {
            alpha_mode,
            n_grid: (4..=12).map(|p| 1usize << p).collect(),
            threshold_exponents: vec![1.0, 2.0, 3.0, 4.0],
            trials: 1000,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.trials as u64 > u32::MAX as u64 {
            return bad(format!("trials = {} exceeds 2^32 - 1", self.trials));
        }
        if self.n_grid.is_empty() {
            return bad("n_grid is empty".into());
        }
        if self.n_grid[0] == 0 {
            return bad("n_grid entries must be positive".into());
        }
        if !self.n_grid.windows(2).all(|w| w[0] < w[1]) {
            return bad("n_grid must be strictly increasing".into());
        }
        if *self.n_grid.last().unwrap() as u64 > u32::MAX as u64 {
            return bad("n_grid entries must be below 2^32".into());
        }
        if self.threshold_exponents.is_empty() {
            return bad("threshold_exponents is empty".into());
        }
        if !self
            .threshold_exponents
            .iter()
            .all(|c| c.is_finite() && *c > 0.0)
        {
            return bad("threshold exponents must be positive and finite".into());
        }
        if !self.threshold_exponents.windows(2).all(|w| w[0] < w[1]) {
            return bad("threshold_exponents must be strictly increasing".into());
        }
        for &n in &self.n_grid {
            self.alpha_mode.shape_for(n)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_modes() {
        assert_eq!(
            "inverse_n".parse::<AlphaMode>().unwrap(),
            AlphaMode::InverseN
        );
        assert_eq!(
            "inverse-n-squared".parse::<AlphaMode>().unwrap(),
            AlphaMode::InverseNSquared
        );
        assert_eq!(
            "fixed:0.25".parse::<AlphaMode>().unwrap(),
            AlphaMode::Fixed(0.25)
        );
        assert_eq!("2".parse::<AlphaMode>().unwrap(), AlphaMode::Fixed(2.0));
        assert!("fixed:-1".parse::<AlphaMode>().is_err());
        assert!("sqrt_n".parse::<AlphaMode>().is_err());
        for mode in [
            AlphaMode::InverseN,
            AlphaMode::InverseNSquared,
            AlphaMode::Fixed(0.125),
        ] {
            assert_eq!(mode.to_string().parse::<AlphaMode>().unwrap(), mode);
        }
    }

    #[test]
    fn default_grid() {
        let c = ExperimentConfig::figure_default(AlphaMode::InverseN);
        assert_eq!(c.n_grid.first(), Some(&16));
        assert_eq!(c.n_grid.last(), Some(&4096));
        assert_eq!(c.n_grid.len(), 9);
        c.validate().unwrap();
    }

    #[test]
    fn validation_failures() {
        let base = ExperimentConfig::figure_default(AlphaMode::InverseN);
        let mut c = base.clone();
        c.trials = 0;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.n_grid = vec![16, 16];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.n_grid.clear();
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.threshold_exponents = vec![2.0, 1.0];
        assert!(c.validate().is_err());
        let mut c = base;
        c.threshold_exponents = vec![0.0];
        assert!(c.validate().is_err());
    }
}
