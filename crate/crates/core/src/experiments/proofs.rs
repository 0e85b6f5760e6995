//! Numeric checks of the inequalities the sparsity bounds are assembled
//! from: the Gamma cdf blowup, the threshold construction with its `n`-fold
//! aggregation, and the Chernoff step on the number of large coordinates.
//!
//! Each check reports signed violations (`lhs - rhs` of an inequality
//! `lhs <= rhs`), so a nonpositive value means the inequality holds.

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::stats::{binomial_upper_tail, wilson_interval, Z_TWO_SIDED_99};
use super::{ExperimentError, Result};
use crate::bounds::chernoff_tail_bound;
use crate::samplers::{derive_stream, StreamSeed};
use crate::special::{inverse_upper_tail_ln, reg_lower_inc_gamma, reg_lower_inc_gamma_ln, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupPoint {
    pub alpha: f64,
    pub z: f64,
    pub c: f64,
    /// `P(α, zc) - z^α P(α, c)`.
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub points: Vec<BlowupPoint>,
    /// The point with the largest violation.
    pub worst: BlowupPoint,
}

impl BlowupReport {
    pub fn max_violation(&self) -> f64 {
        self.worst.violation
    }
}

/// Evaluates `P(α, zc) <= z^α P(α, c)` over the full grid.
pub fn check_gamma_blowup(shapes: &[f64], zs: &[f64], cs: &[f64]) -> Result<BlowupReport> {
    if shapes.is_empty() || zs.is_empty() || cs.is_empty() {
        return Err(ExperimentError::Config(
            "blowup grid has an empty axis".into(),
        ));
    }
    if let Some(z) = zs.iter().find(|z| !(**z >= 1.0 && z.is_finite())) {
        return Err(ExperimentError::Config(format!(
            "blowup requires z >= 1, got {z}"
        )));
    }
    if let Some(c) = cs.iter().find(|c| !(**c >= 0.0 && c.is_finite())) {
        return Err(ExperimentError::Config(format!(
            "blowup requires c >= 0, got {c}"
        )));
    }
    let mut points = Vec::with_capacity(shapes.len() * zs.len() * cs.len());
    for &alpha in shapes {
        Shape::new(alpha)?;
        for &z in zs {
            let scale = (alpha * z.ln()).exp();
            for &c in cs {
                let violation =
                    reg_lower_inc_gamma(alpha, z * c)? - scale * reg_lower_inc_gamma(alpha, c)?;
                points.push(BlowupPoint {
                    alpha,
                    z,
                    c,
                    violation,
                });
            }
        }
    }
    let worst = *points
        .iter()
        .max_by(|a, b| a.violation.total_cmp(&b.violation))
        .expect("nonempty grid");
    Ok(BlowupReport { points, worst })
}

/// The threshold `c` with `Pr[Gamma(α) >= c] = (k+1)/(3n)` and the
/// inequalities it feeds:
///
/// ```text
/// P(c/ε) <= ε^-α P(c) = ε^-α (1 - p) <= ε^-α e^-p,     p = (k+1)/(3n)
/// P(c/ε)^n <= ε^-nα e^-(k+1)/3
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub alpha: f64,
    pub k: u32,
    pub n: usize,
    pub epsilon: f64,
    pub ln_c: f64,
    pub tail_probability: f64,
    /// Violations of the three links, each multiplied through by `ε^α`:
    /// `ε^α P(c/ε) - P(c)`, `|P(c) - (1 - p)|` and `(1 - p) - e^-p`.
    pub links: [f64; 3],
    /// `P(c/ε)^n - ε^-nα e^-(k+1)/3`.
    pub aggregation_violation: f64,
}

impl ThresholdReport {
    pub fn max_violation(&self) -> f64 {
        self.links
            .iter()
            .copied()
            .fold(self.aggregation_violation, f64::max)
    }
}

pub fn check_threshold_construction(
    alpha: f64,
    k: u32,
    n: usize,
    epsilon: f64,
) -> Result<ThresholdReport> {
    Shape::new(alpha)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(ExperimentError::Config(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    let (kf, nf) = (k as f64, n as f64);
    if n == 0 || kf + 1.0 >= 3.0 * nf {
        return Err(ExperimentError::Inapplicable(format!(
            "threshold construction needs k + 1 < 3n (k = {k}, n = {n})"
        )));
    }
    let p = (kf + 1.0) / (3.0 * nf);
    let ln_c = inverse_upper_tail_ln(alpha, p)?;
    let ln_eps = epsilon.ln();
    let cdf_c = reg_lower_inc_gamma_ln(alpha, ln_c)?;
    let cdf_scaled = reg_lower_inc_gamma_ln(alpha, ln_c - ln_eps)?;

    let links = [
        (alpha * ln_eps + cdf_scaled.ln()).exp() - cdf_c,
        (cdf_c - (1.0 - p)).abs(),
        (1.0 - p) - (-p).exp(),
    ];
    let aggregation_violation =
        (nf * cdf_scaled.ln()).exp() - (-nf * alpha * ln_eps - (kf + 1.0) / 3.0).exp();
    Ok(ThresholdReport {
        alpha,
        k,
        n,
        epsilon,
        ln_c,
        tail_probability: p,
        links,
        aggregation_violation,
    })
}

/// Exact and simulated `Pr[Bin(n, p) >= ceil(3np)]` against `exp(-4np/3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChernoffReport {
    pub n: usize,
    pub p: f64,
    pub threshold: u64,
    pub exact_tail: f64,
    pub bound: f64,
    pub trials: usize,
    pub empirical_frequency: f64,
    /// Two-sided 99% Wilson interval around `empirical_frequency`.
    pub confidence_interval: (f64, f64),
}

impl ChernoffReport {
    /// `ln(exact / bound)`; `-inf` for an impossible event.
    pub fn ln_ratio(&self) -> f64 {
        self.exact_tail.ln() - self.bound.ln()
    }

    pub fn empirical_consistent(&self) -> bool {
        let (lo, hi) = self.confidence_interval;
        lo <= self.exact_tail && self.exact_tail <= hi
    }
}

/// `ceil(3np)`, with products within rounding of an integer taken as that
/// integer.
pub fn chernoff_threshold(n: usize, p: f64) -> u64 {
    (3.0 * n as f64 * p - 1e-9).ceil().max(0.0) as u64
}

/// Stream index offset for Chernoff simulations, disjoint from the indices
/// used by the Dirichlet trials.
const CHERNOFF_STREAM_BASE: u64 = u64::MAX - 0xFFFF_FFFF;

pub fn check_chernoff_step(
    n: usize,
    p: f64,
    trials: usize,
    master_seed: u64,
) -> Result<ChernoffReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(ExperimentError::Config(format!(
            "p must lie in (0, 1), got {p}"
        )));
    }
    if trials < 10_000 {
        return Err(ExperimentError::Config(format!(
            "at least 10^4 trials required, got {trials}"
        )));
    }
    let threshold = chernoff_threshold(n, p);
    let exact_tail = binomial_upper_tail(n as u64, p, threshold);
    let bound = chernoff_tail_bound(n, p)?;

    let index = CHERNOFF_STREAM_BASE.wrapping_add(n as u64 ^ p.to_bits().rotate_left(17));
    let mut rng = derive_stream(StreamSeed::new(master_seed, index));
    let binomial =
        Binomial::new(n as u64, p).map_err(|e| ExperimentError::Config(e.to_string()))?;
    let hits = (0..trials)
        .filter(|_| binomial.sample(&mut rng) >= threshold)
        .count();
    Ok(ChernoffReport {
        n,
        p,
        threshold,
        exact_tail,
        bound,
        trials,
        empirical_frequency: hits as f64 / trials as f64,
        confidence_interval: wilson_interval(hits, trials, Z_TWO_SIDED_99),
    })
}

/// Worst case of exact tail against the Chernoff bound over every
/// `p = (k+1)/(3n)` with `k + 1 < 3n`, for each `n` in a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailGridReport {
    pub cases: usize,
    pub worst_n: usize,
    pub worst_k: u64,
    /// `max ln(exact / bound)`; negative when the bound always holds.
    pub max_ln_ratio: f64,
}

pub fn check_chernoff_grid(ns: &[usize]) -> Result<TailGridReport> {
    let mut report = TailGridReport {
        cases: 0,
        worst_n: 0,
        worst_k: 0,
        max_ln_ratio: f64::NEG_INFINITY,
    };
    for &n in ns {
        for k in 0..(3 * n as u64).saturating_sub(1) {
            let p = (k + 1) as f64 / (3 * n) as f64;
            let exact = binomial_upper_tail(n as u64, p, k + 1);
            let ln_ratio = exact.ln() - chernoff_tail_bound(n, p)?.ln();
            report.cases += 1;
            if ln_ratio > report.max_ln_ratio {
                report.max_ln_ratio = ln_ratio;
                report.worst_n = n;
                report.worst_k = k;
            }
        }
    }
    Ok(report)
}

/// Grids used by [`check_all`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofGrids {
    pub blowup_shapes: Vec<f64>,
    pub blowup_z: Vec<f64>,
    pub blowup_c: Vec<f64>,
    pub threshold_alphas: Vec<f64>,
    pub threshold_k: Vec<u32>,
    pub threshold_n: Vec<usize>,
    pub threshold_epsilons: Vec<f64>,
    pub chernoff_pairs: Vec<(usize, f64)>,
    pub chernoff_trials: usize,
    pub chernoff_seed: u64,
    pub tail_grid_n: Vec<usize>,
}

impl Default for ProofGrids {
    fn default() -> Self {
        Self {
            blowup_shapes: vec![1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0],
            blowup_z: vec![1.0, 1.01, 1.5, 2.0, 5.0, 10.0, 100.0],
            blowup_c: vec![0.0, 1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0],
            threshold_alphas: vec![1e-6, 1e-4, 0.01, 0.5, 1.0, 10.0],
            threshold_k: vec![1, 2, 5, 20],
            threshold_n: vec![4, 10, 100, 1000],
            threshold_epsilons: vec![1.0, 0.5, 1e-2, 1e-4],
            chernoff_pairs: vec![
                (30, 0.1),
                (300, 6.0 / 900.0),
                (100, 0.05),
                (1000, 2.0 / 3000.0),
                (1000, 21.0 / 3000.0),
                (10, 0.5),
            ],
            chernoff_trials: 10_000,
            chernoff_seed: 0,
            tail_grid_n: (1..=300).chain([500, 1000, 2000, 3000]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub slack: f64,
    pub blowup: BlowupReport,
    pub thresholds: Vec<ThresholdReport>,
    pub chernoff: Vec<ChernoffReport>,
    pub tail_grid: TailGridReport,
}

impl ProofReport {
    pub fn blowup_ok(&self) -> bool {
        self.blowup.max_violation() <= self.slack
    }

    pub fn thresholds_ok(&self) -> bool {
        self.thresholds
            .iter()
            .all(|t| t.max_violation() <= self.slack)
    }

    /// Exact tails stay below the bound up to relative error `slack`, and
    /// every simulated frequency agrees with its exact tail.
    pub fn chernoff_ok(&self) -> bool {
        let rel = self.slack.ln_1p();
        self.chernoff
            .iter()
            .all(|c| c.ln_ratio() <= rel && c.empirical_consistent())
            && self.tail_grid.max_ln_ratio <= rel
    }

    pub fn all_ok(&self) -> bool {
        self.blowup_ok() && self.thresholds_ok() && self.chernoff_ok()
    }
}

/// Runs every check over `grids`. Threshold combinations with
/// `k + 1 >= 3n` are skipped.
pub fn check_all(grids: &ProofGrids, slack: f64) -> Result<ProofReport> {
    let blowup = check_gamma_blowup(&grids.blowup_shapes, &grids.blowup_z, &grids.blowup_c)?;
    let mut thresholds = Vec::new();
    for &alpha in &grids.threshold_alphas {
        for &k in &grids.threshold_k {
            for &n in &grids.threshold_n {
                if k as f64 + 1.0 >= 3.0 * n as f64 {
                    continue;
                }
                for &eps in &grids.threshold_epsilons {
                    thresholds.push(check_threshold_construction(alpha, k, n, eps)?);
                }
            }
        }
    }
    let chernoff = grids
        .chernoff_pairs
        .iter()
        .map(|&(n, p)| check_chernoff_step(n, p, grids.chernoff_trials, grids.chernoff_seed))
        .collect::<Result<Vec<_>>>()?;
    let tail_grid = check_chernoff_grid(&grids.tail_grid_n)?;
    Ok(ProofReport {
        slack,
        blowup,
        thresholds,
        chernoff,
        tail_grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::NUMERIC_SLACK;
    use approx::assert_relative_eq;

    #[test]
    fn blowup_exponential_case() {
        let r = check_gamma_blowup(&[1.0], &[1.0, 2.0], &[1.0]).unwrap();
        assert_eq!(r.points[0].violation, 0.0);
        // (1 - e^-2) - 2 (1 - e^-1)
        assert_relative_eq!(
            r.points[1].violation,
            -0.399_576_400_893_728,
            max_relative = 1e-13
        );
        assert_eq!(r.worst.z, 1.0);
        assert!(check_gamma_blowup(&[1.0], &[0.5], &[1.0]).is_err());
    }

    #[test]
    fn blowup_default_grid() {
        let g = ProofGrids::default();
        let r = check_gamma_blowup(&g.blowup_shapes, &g.blowup_z, &g.blowup_c).unwrap();
        assert!(r.max_violation() <= NUMERIC_SLACK, "{:?}", r.worst);
        assert!(r
            .points
            .iter()
            .filter(|p| p.z == 1.0)
            .all(|p| p.violation.abs() <= 1e-15));
    }

    #[test]
    fn threshold_exponential_case() {
        let r = check_threshold_construction(1.0, 2, 4, 0.5).unwrap();
        assert_relative_eq!(r.ln_c.exp(), 4f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(r.links[0], -0.28125, max_relative = 1e-9);
        assert!(r.links[1] < 1e-10);
        assert_relative_eq!(r.links[2], 0.75 - (-0.25f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(
            r.aggregation_violation,
            (15.0f64 / 16.0).powi(4) - 16.0 / std::f64::consts::E,
            max_relative = 1e-9
        );
    }

    #[test]
    fn threshold_unit_epsilon_reduces_to_last_link() {
        let r = check_threshold_construction(0.3, 5, 10, 1.0).unwrap();
        assert_eq!(r.links[0], 0.0);
        assert_relative_eq!(
            r.links[2],
            (1.0 - 0.2) - (-0.2f64).exp(),
            max_relative = 1e-12
        );
        assert!(r.max_violation() <= NUMERIC_SLACK);
    }

    #[test]
    fn threshold_tiny_shape() {
        let r = check_threshold_construction(1e-4, 5, 100, 1e-4).unwrap();
        assert!(r.max_violation() <= NUMERIC_SLACK, "{r:?}");
        assert!(r.ln_c < -100.0);
        assert!(matches!(
            check_threshold_construction(1.0, 11, 4, 0.5),
            Err(ExperimentError::Inapplicable(_))
        ));
    }

    #[test]
    fn chernoff_examples() {
        let r = check_chernoff_step(30, 0.1, 10_000, 1).unwrap();
        assert_eq!(r.threshold, 9);
        assert_relative_eq!(
            r.exact_tail,
            2.019_829_005_258_299_8e-3,
            max_relative = 1e-12
        );
        assert_relative_eq!(r.bound, (-4.0f64).exp(), max_relative = 1e-15);
        assert!(r.empirical_consistent());

        let r = check_chernoff_step(300, 6.0 / 900.0, 10_000, 1).unwrap();
        assert_eq!(r.threshold, 6);
        assert_relative_eq!(r.bound, (-8.0f64 / 3.0).exp(), max_relative = 1e-14);
        assert!(r.exact_tail <= r.bound);

        let r = check_chernoff_step(10, 0.5, 10_000, 1).unwrap();
        assert_eq!(
            (r.threshold, r.exact_tail, r.empirical_frequency),
            (15, 0.0, 0.0)
        );
        assert!(check_chernoff_step(10, 0.5, 9_999, 1).is_err());
    }

    #[test]
    fn chernoff_threshold_rounding() {
        // 3 * 300 * (6/900) is 6 up to rounding
        assert_eq!(chernoff_threshold(300, 6.0 / 900.0), 6);
        assert_eq!(chernoff_threshold(30, 0.1), 9);
        assert_eq!(chernoff_threshold(10, 0.11), 4);
    }

    #[test]
    fn chernoff_bound_fails_for_large_means() {
        // the exp(-4np/3) form is not a valid tail bound once np is large:
        // Pr[Bin(1e5, 281/3e5) >= 281] exceeds e^(-4 * 281 / 9)
        let n = 100_000;
        let p = 281.0 / 300_000.0;
        let exact = binomial_upper_tail(n as u64, p, 281);
        let bound = chernoff_tail_bound(n, p).unwrap();
        assert_relative_eq!(exact, 5.781_188_963_845_9e-55, max_relative = 1e-9);
        assert_relative_eq!(bound, 5.773_573_574_337_7e-55, max_relative = 1e-12);
        assert!(exact > bound);
    }

    #[test]
    fn default_checks_pass_and_negative_slack_fails() {
        let report = check_all(&ProofGrids::default(), NUMERIC_SLACK).unwrap();
        assert!(report.blowup_ok());
        assert!(report.thresholds_ok());
        assert!(report.chernoff_ok(), "{:?}", report.tail_grid);
        assert!(report.tail_grid.max_ln_ratio < 0.0);

        let corrupted = ProofReport {
            slack: -1e-3,
            ..report
        };
        assert!(!corrupted.all_ok());
    }
}
