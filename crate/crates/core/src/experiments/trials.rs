use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AlphaMode, ExperimentConfig, ExperimentError, Result};
use crate::bounds::power_threshold_ln;
use crate::samplers::{derive_stream, sample_dirichlet_log, DirichletSpec, StreamSeed};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCount {
    pub exponent: f64,
    pub count: usize,
}

/// One Dirichlet draw reduced to its sparsity counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial_index: u64,
    pub stream: StreamSeed,
    /// Sorted by exponent.
    pub counts: Vec<ThresholdCount>,
}

impl TrialRecord {
    pub fn count_for(&self, exponent: f64) -> Option<usize> {
        self.counts
            .iter()
            .find(|c| c.exponent == exponent)
            .map(|c| c.count)
    }

    /// Larger exponents mean smaller thresholds, so counts never decrease.
    pub fn counts_monotone(&self) -> bool {
        self.counts
            .windows(2)
            .all(|w| w[0].exponent < w[1].exponent && w[0].count <= w[1].count)
    }
}

/// Stream index for trial `t` at dimension `n`; both must be below 2^32.
pub fn pair_index(n: usize, trial: u64) -> u64 {
    debug_assert!((n as u64) < (1 << 32) && trial < (1 << 32));
    ((n as u64) << 32) | trial
}

/// Runs trials `trial_range` for one dimension. Trials execute in parallel;
/// each owns its stream, so output is independent of scheduling.
pub fn run_cell(
    master_seed: u64,
    alpha_mode: AlphaMode,
    n: usize,
    exponents: &[f64],
    trial_range: Range<u64>,
) -> Result<Vec<TrialRecord>> {
    if trial_range.end > u32::MAX as u64 + 1 || n as u64 > u32::MAX as u64 {
        return Err(ExperimentError::Config(format!(
            "n = {n} or trial range {trial_range:?} exceeds the 32-bit stream index layout"
        )));
    }
    let spec = DirichletSpec::new(n, alpha_mode.shape_for(n)?).map_err(|source| {
        ExperimentError::Sampling {
            n,
            trial: trial_range.start,
            source,
        }
    })?;
    let thresholds: Vec<(f64, f64)> = exponents
        .iter()
        .map(|&c| (c, power_threshold_ln(n, c)))
        .collect();

    let records = trial_range
        .into_par_iter()
        .map(|trial_index| {
            let stream = StreamSeed::new(master_seed, pair_index(n, trial_index));
            let mut rng = derive_stream(stream);
            let point = sample_dirichlet_log(&mut rng, &spec);
            let counts = thresholds
                .iter()
                .map(|&(exponent, ln_eps)| ThresholdCount {
                    exponent,
                    count: point.count_at_or_above_ln(ln_eps),
                })
                .collect();
            TrialRecord {
                n,
                trial_index,
                stream,
                counts,
            }
        })
        .collect();
    Ok(records)
}

/// All trials of `config`, sorted by `(n, trial_index)`.
pub fn run_trials(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.n_grid.len() * config.trials);
    for &n in &config.n_grid {
        records.extend(run_cell(
            config.master_seed,
            config.alpha_mode,
            n,
            &config.threshold_exponents,
            0..config.trials as u64,
        )?);
    }
    records.sort_by_key(|r| (r.n, r.trial_index));
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(
        n_grid: Vec<usize>,
        mode: AlphaMode,
        exponents: Vec<f64>,
        trials: usize,
    ) -> ExperimentConfig {
        ExperimentConfig {
            alpha_mode: mode,
            n_grid,
            threshold_exponents: exponents,
            trials,
            master_seed: 99,
        }
    }

    #[test]
    fn one_dimension_counts_one() {
        let records = run_trials(&config(vec![1], AlphaMode::Fixed(0.3), vec![1.0], 50)).unwrap();
        assert_eq!(records.len(), 50);
        assert!(records.iter().all(|r| r.counts
            == vec![ThresholdCount {
                exponent: 1.0,
                count: 1
            }]));
    }

    #[test]
    fn records_sorted_and_monotone() {
        let c = config(
            vec![4, 32, 128],
            AlphaMode::InverseN,
            vec![0.5, 1.0, 2.0, 3.0],
            200,
        );
        let records = run_trials(&c).unwrap();
        assert_eq!(records.len(), 600);
        assert!(records
            .windows(2)
            .all(|w| (w[0].n, w[0].trial_index) < (w[1].n, w[1].trial_index)));
        assert!(records.iter().all(TrialRecord::counts_monotone));
        assert!(records
            .iter()
            .all(|r| r.stream == StreamSeed::new(99, pair_index(r.n, r.trial_index))));
    }

    #[test]
    fn median_within_theorem1_ceiling() {
        let n = 256;
        let records = run_trials(&config(vec![n], AlphaMode::InverseN, vec![1.0], 1000)).unwrap();
        let mut counts: Vec<usize> = records.iter().map(|r| r.counts[0].count).collect();
        counts.sort_unstable();
        let median = 0.5 * (counts[499] + counts[500]) as f64;
        assert!(
            (1.0..=6.0 * (n as f64).ln()).contains(&median),
            "median = {median}"
        );
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let c = config(
            vec![16, 64],
            AlphaMode::InverseNSquared,
            vec![1.0, 2.0],
            300,
        );
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_trials(&c).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn pair_index_layout() {
        assert_eq!(pair_index(1, 0), 1 << 32);
        assert_eq!(pair_index(16, 999), (16 << 32) | 999);
        assert_ne!(pair_index(2, 1), pair_index(1, 2));
    }
}
