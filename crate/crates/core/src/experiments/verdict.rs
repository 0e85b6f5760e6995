use serde::{Deserialize, Serialize};

use super::stats::{wilson_interval, Z_ONE_SIDED_99};
use super::trials::run_cell;
use super::{AlphaMode, ExperimentError, Result, TrialRecord, NUMERIC_SLACK};
use crate::bounds::{
    helper_bound_ln, power_threshold_ln, theorem1_bound, theorem2_bound, theorem2_event,
    theorem3_bound, theorem3_event, BoundResult, KChoice, SparsityEvent,
};

/// A theoretical statement `Pr[event] >= bound` for `Dir(alpha)` at the power
/// threshold `n^-threshold_exponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundClaim {
    pub label: String,
    pub alpha: f64,
    pub threshold_exponent: f64,
    pub event: SparsityEvent,
    pub bound: BoundResult,
}

/// Trials drawn from `Dir(alpha)` in `n` dimensions.
#[derive(Debug, Clone, Copy)]
pub struct CellSample<'a> {
    pub n: usize,
    pub alpha: f64,
    pub records: &'a [TrialRecord],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub label: String,
    pub alpha: f64,
    pub threshold_exponent: f64,
    pub event: SparsityEvent,
    pub theoretical_lower_bound: f64,
    pub trials: usize,
    pub successes: usize,
    pub empirical_success_rate: f64,
    /// One-sided 99% Wilson lower limit on the success probability.
    pub confidence_lower: f64,
    /// One-sided 99% Wilson upper limit on the success probability.
    pub confidence_upper: f64,
    /// The data are consistent with the bound: `confidence_upper >= bound - slack`.
    pub pass: bool,
    /// The data establish the bound: `confidence_lower >= bound - slack`.
    pub demonstrated: bool,
    /// The verdict comes from the enlarged rerun.
    pub rerun: bool,
}

/// Trial multiplier applied when a cell is rerun after a failed verdict.
pub const RERUN_FACTOR: usize = 10;

/// Master seed for reruns; distinct from, but determined by, the original.
pub fn rerun_master(master: u64) -> u64 {
    let mut z = (master ^ 0x5EED_5EED_5EED_5EED).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Tests a claim against the trials of the matching cell.
///
/// A cell fails only when even the optimistic 99% limit falls below the
/// bound, so a correct bound fails at most 1% of the time.
pub fn verify_bound(sample: &CellSample<'_>, claim: &BoundClaim) -> Result<BoundVerdict> {
    if !claim.bound.preconditions_met {
        return Err(ExperimentError::Inapplicable(claim.label.clone()));
    }
    if sample.n != claim.event.n {
        return Err(ExperimentError::Mismatch(format!(
            "records are for n = {}, claim '{}' is for n = {}",
            sample.n, claim.label, claim.event.n
        )));
    }
    if (sample.alpha - claim.alpha).abs() > 1e-15 * claim.alpha.abs() {
        return Err(ExperimentError::Mismatch(format!(
            "records are for alpha = {}, claim '{}' is for alpha = {}",
            sample.alpha, claim.label, claim.alpha
        )));
    }
    if claim.event.ln_epsilon != power_threshold_ln(sample.n, claim.threshold_exponent) {
        return Err(ExperimentError::Mismatch(format!(
            "claim '{}' threshold is not n^-{}",
            claim.label, claim.threshold_exponent
        )));
    }
    if sample.records.is_empty() {
        return Err(ExperimentError::EmptyCell {
            n: sample.n,
            exponent: claim.threshold_exponent,
        });
    }
    let mut successes = 0;
    for r in sample.records {
        if r.n != sample.n {
            return Err(ExperimentError::Mismatch(format!(
                "record for n = {} in cell n = {}",
                r.n, sample.n
            )));
        }
        let count = r.count_for(claim.threshold_exponent).ok_or_else(|| {
            ExperimentError::Mismatch(format!(
                "trial {} has no count for exponent {}",
                r.trial_index, claim.threshold_exponent
            ))
        })?;
        if claim.event.holds_for(count) {
            successes += 1;
        }
    }
    let trials = sample.records.len();
    let (confidence_lower, confidence_upper) = wilson_interval(successes, trials, Z_ONE_SIDED_99);
    let theoretical = claim.bound.lower_bound;
    Ok(BoundVerdict {
        label: claim.label.clone(),
        alpha: claim.alpha,
        threshold_exponent: claim.threshold_exponent,
        event: claim.event,
        theoretical_lower_bound: theoretical,
        trials,
        successes,
        empirical_success_rate: successes as f64 / trials as f64,
        confidence_lower,
        confidence_upper,
        pass: confidence_upper >= theoretical - NUMERIC_SLACK,
        demonstrated: confidence_lower >= theoretical - NUMERIC_SLACK,
        rerun: false,
    })
}

/// [`verify_bound`], rerunning the cell once with [`RERUN_FACTOR`] times the
/// trials when the first verdict fails.
pub fn verify_with_rerun(
    master_seed: u64,
    alpha_mode: AlphaMode,
    exponents: &[f64],
    sample: &CellSample<'_>,
    claim: &BoundClaim,
) -> Result<BoundVerdict> {
    let first = verify_bound(sample, claim)?;
    if first.pass {
        return Ok(first);
    }
    let trials = (sample.records.len() * RERUN_FACTOR) as u64;
    let records = run_cell(
        rerun_master(master_seed),
        alpha_mode,
        sample.n,
        exponents,
        0..trials,
    )?;
    let rerun_sample = CellSample {
        records: &records,
        ..*sample
    };
    let mut verdict = verify_bound(&rerun_sample, claim)?;
    verdict.rerun = true;
    Ok(verdict)
}

/// The bound claims the harness checks for dimension `n`, including ones
/// whose preconditions fail (callers skip those).
pub fn claims_for(alpha_mode: AlphaMode, n: usize, exponents: &[f64]) -> Result<Vec<BoundClaim>> {
    let alpha = alpha_mode.shape_for(n)?.get();
    let ln_n = (n as f64).ln();
    let mut claims = Vec::new();
    let mut push = |label: String, exponent: f64, event: SparsityEvent, bound: BoundResult| {
        claims.push(BoundClaim {
            label,
            alpha,
            threshold_exponent: exponent,
            event,
            bound,
        })
    };
    match alpha_mode {
        AlphaMode::InverseN => {
            for &c in exponents {
                if n >= 2 && c >= 1.0 {
                    let t1 = theorem1_bound(n, c)?;
                    push(format!("theorem1(c0={c})"), c, t1.event, t1.result);
                }
                push(
                    format!("theorem2(c1=1,c2={},c3={c})", 3.0 * c),
                    c,
                    theorem2_event(n, 3.0 * c, c)?,
                    theorem2_bound(n, 1.0, 3.0 * c, c)?,
                );
            }
        }
        AlphaMode::InverseNSquared => {
            for &c in exponents {
                if n >= 3 && c == 2.0 {
                    push(
                        "theorem3(k=5)".into(),
                        c,
                        theorem3_event(n, KChoice::Constant)?,
                        theorem3_bound(n, KChoice::Constant)?,
                    );
                    let g = KChoice::LnG(ln_n);
                    push(
                        "theorem3(g(n)=n)".into(),
                        c,
                        theorem3_event(n, g)?,
                        theorem3_bound(n, g)?,
                    );
                }
                let ln_eps = power_threshold_ln(n, c);
                push(
                    format!("lemma4(k=5,c={c})"),
                    c,
                    SparsityEvent::power_threshold(n, c, 5.0)?,
                    helper_bound_ln(ln_eps, alpha, 5.0, n)?,
                );
            }
        }
        AlphaMode::Fixed(_) => {
            for &c in exponents {
                let k = 6.0 * c * ln_n;
                push(
                    format!("lemma4(k=6c ln n,c={c})"),
                    c,
                    SparsityEvent::power_threshold(n, c, k)?,
                    helper_bound_ln(power_threshold_ln(n, c), alpha, k, n)?,
                );
            }
        }
    }
    Ok(claims)
}
