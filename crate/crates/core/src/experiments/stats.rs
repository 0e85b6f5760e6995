//! Finite-sample statistics used by the verdicts and sampler checks.

use crate::logspace::{log_mean_exp, log_sum_exp, CompensatedSum};

/// Standard normal quantile at 0.99 (one-sided 99% limits).
pub const Z_ONE_SIDED_99: f64 = 2.326_347_874_040_841;

/// Standard normal quantile at 0.995 (two-sided 99% intervals).
pub const Z_TWO_SIDED_99: f64 = 2.575_829_303_548_900_4;

/// Wilson score limits `(lower, upper)` for `successes / trials` at normal
/// quantile `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lower = if successes == 0 {
        0.0
    } else {
        ((centre - half) / denom).clamp(0.0, 1.0)
    };
    let upper = if successes == trials {
        1.0
    } else {
        ((centre + half) / denom).clamp(0.0, 1.0)
    };
    (lower, upper)
}

/// `Pr[Binomial(n, p) >= m]` by direct summation of the pmf from `m` up.
///
/// The leading pmf term is built from log ratios; later terms follow the
/// pmf ratio and the sum stops once terms no longer change it.
pub fn binomial_upper_tail(n: u64, p: f64, m: u64) -> f64 {
    assert!((0.0..=1.0).contains(&p));
    if m == 0 {
        return 1.0;
    }
    if m > n || p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return 1.0;
    }
    let (nf, mf) = (n as f64, m as f64);
    // ln C(n, m) as a compensated sum of log ratios; more accurate than
    // differencing large log-gamma values
    let mut ln_pmf_m: CompensatedSum = (0..m)
        .map(|j| ((n - j) as f64 / (j + 1) as f64).ln())
        .collect();
    ln_pmf_m.add(mf * p.ln());
    ln_pmf_m.add((nf - mf) * (-p).ln_1p());
    let ln_pmf_m = ln_pmf_m.total();
    let odds = p / (1.0 - p);
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in m..n {
        term *= (n - j) as f64 / (j + 1) as f64 * odds;
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    (ln_pmf_m + sum.ln()).exp().min(1.0)
}

/// Kolmogorov–Smirnov statistic `sup |F_n(x) - F(x)|` of `samples` against
/// the continuous cdf `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at level 0.01 with Stephens' finite-sample
/// correction.
pub fn ks_critical_value_1pct(n: usize) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    1.627_6 / (sqrt_n + 0.12 + 0.11 / sqrt_n)
}

/// Sample mean and unbiased variance of `exp(x_i)` from log values, with
/// every sum formed by max-shifted compensated log-sum-exp so that values
/// whose exponentials underflow still contribute.
pub fn moments_from_logs(logs: &[f64]) -> (f64, f64) {
    let n = logs.len() as f64;
    let ln_mean = log_mean_exp(logs);
    let doubled: Vec<f64> = logs.iter().map(|l| 2.0 * l).collect();
    let ln_second = log_sum_exp(&doubled) - n.ln();
    let mean = ln_mean.exp();
    let second = ln_second.exp();
    (mean, (second - mean * mean) * n / (n - 1.0))
}
