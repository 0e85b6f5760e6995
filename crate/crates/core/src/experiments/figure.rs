use serde::{Deserialize, Serialize};

use super::{
    claims_for, quantile_curves, run_trials, verify_with_rerun, AlphaMode, BoundVerdict,
    CellSample, ExperimentConfig, QuantileCurve, Result, TrialRecord,
};

/// Everything produced by one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Sorted by `(n, trial_index)`.
    pub records: Vec<TrialRecord>,
    pub curves: Vec<QuantileCurve>,
    pub verdicts: Vec<BoundVerdict>,
    /// `(n, label)` of claims whose preconditions fail at that `n`.
    pub skipped: Vec<(usize, String)>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Runs the trials, builds quantile curves (scaled by `ln n` in
/// [`AlphaMode::InverseN`]) and verifies every applicable bound claim.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let records = run_trials(config)?;
    let scale = config.alpha_mode == AlphaMode::InverseN;
    let curves = quantile_curves(&records, scale)?;

    let mut verdicts = Vec::new();
    let mut skipped = Vec::new();
    for cell in records.chunk_by(|a, b| a.n == b.n) {
        let n = cell[0].n;
        let sample = CellSample {
            n,
            alpha: config.alpha_mode.shape_for(n)?.get(),
            records: cell,
        };
        for claim in claims_for(config.alpha_mode, n, &config.threshold_exponents)? {
            if claim.bound.preconditions_met {
                verdicts.push(verify_with_rerun(
                    config.master_seed,
                    config.alpha_mode,
                    &config.threshold_exponents,
                    &sample,
                    &claim,
                )?);
            } else {
                skipped.push((n, claim.label));
            }
        }
    }
    Ok(ExperimentReport {
        config: config.clone(),
        records,
        curves,
        verdicts,
        skipped,
    })
}
