use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ExperimentError, Result, TrialRecord};

/// Quartiles of the sparsity count for one `(n, exponent)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileCurve {
    pub n: usize,
    pub threshold_exponent: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    /// Values are `count / ln n`.
    pub scaled_by_log_n: bool,
}

/// Linear interpolation between closest ranks (`h = (N - 1) q`).
///
/// `sorted` must be nonempty and ascending.
pub fn quantile_type7(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Per-`(n, exponent)` 25/50/75% quantiles, ordered by `n` then exponent.
pub fn quantile_curves(
    records: &[TrialRecord],
    scale_by_log_n: bool,
) -> Result<Vec<QuantileCurve>> {
    if records.is_empty() {
        return Err(ExperimentError::EmptyCell {
            n: 0,
            exponent: f64::NAN,
        });
    }
    let mut by_n: BTreeMap<usize, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        by_n.entry(r.n).or_default().push(r);
    }

    let mut curves = Vec::new();
    for (n, group) in by_n {
        if scale_by_log_n && n < 2 {
            return Err(ExperimentError::Config(
                "ln(n) scaling is undefined for n = 1".into(),
            ));
        }
        let scale = if scale_by_log_n { (n as f64).ln() } else { 1.0 };
        let exponents: Vec<f64> = group[0].counts.iter().map(|c| c.exponent).collect();
        for (slot, &exponent) in exponents.iter().enumerate() {
            let mut values = Vec::with_capacity(group.len());
            for r in &group {
                match r.counts.get(slot) {
                    Some(c) if c.exponent == exponent => values.push(c.count as f64),
                    _ => {
                        return Err(ExperimentError::Mismatch(format!(
                            "trial {} at n = {n} lacks exponent {exponent}",
                            r.trial_index
                        )))
                    }
                }
            }
            values.sort_by(f64::total_cmp);
            curves.push(QuantileCurve {
                n,
                threshold_exponent: exponent,
                q25: quantile_type7(&values, 0.25) / scale,
                q50: quantile_type7(&values, 0.50) / scale,
                q75: quantile_type7(&values, 0.75) / scale,
                scaled_by_log_n: scale_by_log_n,
            });
        }
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::ThresholdCount;
    use crate::samplers::StreamSeed;
    use proptest::prelude::*;

    fn records(n: usize, counts: &[usize]) -> Vec<TrialRecord> {
        counts
            .iter()
            .enumerate()
            .map(|(t, &count)| TrialRecord {
                n,
                trial_index: t as u64,
                stream: StreamSeed::new(0, t as u64),
                counts: vec![ThresholdCount {
                    exponent: 1.0,
                    count,
                }],
            })
            .collect()
    }

    #[test]
    fn four_point_sample() {
        let c = quantile_curves(&records(16, &[0, 1, 2, 3]), false).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].q25, c[0].q50, c[0].q75), (0.75, 1.5, 2.25));
    }

    #[test]
    fn degenerate_sample() {
        let c = quantile_curves(&records(16, &[4; 9]), false).unwrap();
        assert_eq!((c[0].q25, c[0].q50, c[0].q75), (4.0, 4.0, 4.0));
        let s = quantile_curves(&records(16, &[4; 9]), true).unwrap();
        let expected = 4.0 / 16f64.ln();
        assert_eq!(
            (s[0].q25, s[0].q50, s[0].q75),
            (expected, expected, expected)
        );
        assert!(s[0].scaled_by_log_n);
    }

    #[test]
    fn errors() {
        assert!(quantile_curves(&[], false).is_err());
        assert!(quantile_curves(&records(1, &[1, 1]), true).is_err());
        let mut bad = records(8, &[1, 2]);
        bad[1].counts[0].exponent = 2.0;
        assert!(matches!(
            quantile_curves(&bad, false),
            Err(ExperimentError::Mismatch(_))
        ));
    }

    proptest! {
        #[test]
        fn quartiles_ordered(counts in proptest::collection::vec(0usize..50, 1..200)) {
            let c = quantile_curves(&records(10, &counts), false).unwrap();
            prop_assert!(c[0].q25 <= c[0].q50 && c[0].q50 <= c[0].q75);
        }
    }
}
