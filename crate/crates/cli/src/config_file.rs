//! Flat `key = value` experiment files.
//!
//! ```text
//! # comments and blank lines are ignored
//! alpha_mode = inverse_n
//! n_grid = 16, 32, 64
//! threshold_exponents = 1, 2
//! trials = 1000
//! master_seed = 7
//! ```

use std::collections::HashSet;

use dirsparse::experiments::{AlphaMode, ExperimentConfig};

use crate::args::ExperimentArgs;
use crate::error::CliError;

#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    pub alpha_mode: Option<AlphaMode>,
    pub n_grid: Option<Vec<usize>>,
    pub threshold_exponents: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub master_seed: Option<u64>,
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Usage(format!("{key}: cannot parse '{s}'")))
        })
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("{key}: cannot parse '{value}'")))
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut config = ConfigFile::default();
        let mut seen = HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(CliError::Usage(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
            match key {
                "alpha_mode" => {
                    config.alpha_mode =
                        Some(value.parse().map_err(|e| CliError::Usage(format!("{e}")))?)
                }
                "n_grid" => config.n_grid = Some(parse_list(key, value)?),
                "threshold_exponents" => config.threshold_exponents = Some(parse_list(key, value)?),
                "trials" => config.trials = Some(parse_scalar(key, value)?),
                "master_seed" => config.master_seed = Some(parse_scalar(key, value)?),
                _ => {
                    return Err(CliError::Usage(format!(
                        "line {}: unknown key '{key}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(config)
    }
}

/// Figure defaults, overridden by the file, overridden by flags.
pub fn resolve(args: &ExperimentArgs) -> Result<ExperimentConfig, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::default(),
    };
    let alpha_mode = args
        .alpha_mode
        .or(file.alpha_mode)
        .unwrap_or(AlphaMode::InverseN);
    let mut config = ExperimentConfig::figure_default(alpha_mode);
    if let Some(n) = args.n.clone().or(file.n_grid) {
        config.n_grid = n;
    }
    if let Some(e) = args.exponents.clone().or(file.threshold_exponents) {
        config.threshold_exponents = e;
    }
    if let Some(t) = args.trials.or(file.trials) {
        config.trials = t;
    }
    if let Some(s) = args.seed.or(file.master_seed) {
        config.master_seed = s;
    }
    config.validate()?;
    Ok(config)
}
