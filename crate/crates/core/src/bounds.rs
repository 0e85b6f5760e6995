//! Closed-form lower bounds on `Pr[|{i : X_i >= ε}| <= k]` for `X ~ Dir(α)`.
//!
//! The master bound is
//!
//! ```text
//! 1 - ε^(-nα) e^(-(k+1)/3) - e^(-4(k+1)/9),      valid when k + 1 < 3n,
//! ```
//!
//! and the three theorem-level bounds are instantiations of it: the
//! `α = c₁/n` family, its `c₁ = 1, c₂ = 6c₀, c₃ = c₀` specialization, and the
//! `α = 1/n²` regime where `n^(2/n) <= e^(2/e)` removes the dependence on `n`.
//!
//! Preconditions of the stated theorems are reported through
//! [`BoundResult::preconditions_met`], not as errors. Errors are reserved for
//! arguments outside the functions' numeric domains.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::{reg_inc_beta_pair, SpecialError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("{argument} = {value} is outside the domain of {bound}")]
    Domain {
        bound: &'static str,
        argument: &'static str,
        value: f64,
    },
    #[error(transparent)]
    Special(#[from] SpecialError),
}

type Result<T> = std::result::Result<T, BoundError>;

fn domain(bound: &'static str, argument: &'static str, value: f64) -> BoundError {
    BoundError::Domain {
        bound,
        argument,
        value,
    }
}

/// The two subtracted terms of a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundTerms {
    pub first_term: f64,
    pub second_term: f64,
}

/// A probability lower bound `1 - first_term - second_term`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub lower_bound: f64,
    pub preconditions_met: bool,
    pub terms: BoundTerms,
}

impl BoundResult {
    fn from_terms(first_term: f64, second_term: f64, preconditions_met: bool) -> Self {
        Self {
            lower_bound: 1.0 - first_term - second_term,
            preconditions_met,
            terms: BoundTerms {
                first_term,
                second_term,
            },
        }
    }

    /// True when the bound is below zero and therefore carries no
    /// information, though it is still a valid statement.
    pub fn is_vacuous(&self) -> bool {
        self.lower_bound < 0.0
    }

    /// The bound, if its preconditions hold.
    pub fn applicable(&self) -> Option<f64> {
        self.preconditions_met.then_some(self.lower_bound)
    }
}

/// The event `|{i : X_i >= ε}| <= k` for an `n`-dimensional draw.
///
/// The threshold is kept as `ln ε` so that thresholds such as `n^-c` compare
/// exactly against log-domain coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparsityEvent {
    pub n: usize,
    pub ln_epsilon: f64,
    pub k: f64,
}

impl SparsityEvent {
    pub fn new(n: usize, epsilon: f64, k: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(domain("SparsityEvent", "epsilon", epsilon));
        }
        Self::with_ln_epsilon(n, epsilon.ln(), k)
    }

    /// `ε = n^(-exponent)`, stored as `-exponent * ln n`.
    pub fn power_threshold(n: usize, exponent: f64, k: f64) -> Result<Self> {
        if !(exponent >= 0.0 && exponent.is_finite()) {
            return Err(domain("SparsityEvent", "threshold exponent", exponent));
        }
        Self::with_ln_epsilon(n, power_threshold_ln(n, exponent), k)
    }

    fn with_ln_epsilon(n: usize, ln_epsilon: f64, k: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("SparsityEvent", "n", 0.0));
        }
        if ln_epsilon.is_nan() || ln_epsilon > 0.0 {
            return Err(domain("SparsityEvent", "ln epsilon", ln_epsilon));
        }
        if !(k >= 0.0 && k.is_finite()) {
            return Err(domain("SparsityEvent", "k", k));
        }
        Ok(Self { n, ln_epsilon, k })
    }

    pub fn epsilon(&self) -> f64 {
        self.ln_epsilon.exp()
    }

    /// Whether an observed count satisfies the event.
    pub fn holds_for(&self, count: usize) -> bool {
        count as f64 <= self.k
    }
}

/// `ln(n^-exponent)`, the single formula used for power thresholds
/// everywhere in the crate.
pub fn power_threshold_ln(n: usize, exponent: f64) -> f64 {
    -exponent * (n as f64).ln()
}

/// Lower bound `1 - ε^(-nα) e^(-(k+1)/3) - e^(-4(k+1)/9)`.
///
/// `ε^(-nα)` is formed as `exp(-nα ln ε)` inside a single exponential with
/// the `-(k+1)/3` factor. `k` is real-valued; the precondition is
/// `k + 1 < 3n`.
pub fn helper_bound(epsilon: f64, alpha: f64, k: f64, n: usize) -> Result<BoundResult> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(domain("helper_bound", "epsilon", epsilon));
    }
    helper_bound_ln(epsilon.ln(), alpha, k, n)
}

/// [`helper_bound`] with the threshold given as `ln ε`.
pub fn helper_bound_ln(ln_epsilon: f64, alpha: f64, k: f64, n: usize) -> Result<BoundResult> {
    const NAME: &str = "helper_bound";
    if ln_epsilon.is_nan() || ln_epsilon > 0.0 {
        return Err(domain(NAME, "ln epsilon", ln_epsilon));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain(NAME, "alpha", alpha));
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(domain(NAME, "k", k));
    }
    if n == 0 {
        return Err(domain(NAME, "n", 0.0));
    }
    let nf = n as f64;
    let first = (-nf * alpha * ln_epsilon - (k + 1.0) / 3.0).exp();
    let second = (-4.0 * (k + 1.0) / 9.0).exp();
    Ok(BoundResult::from_terms(first, second, k + 1.0 < 3.0 * nf))
}

fn check_positive(bound: &'static str, argument: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(domain(bound, argument, value))
    }
}

/// Bound for `Dir(c₁/n)`, threshold `n^-c₃` and ceiling `c₂ ln n`:
///
/// ```text
/// 1 - e^(-1/3) (1/n)^(c₂/3 - c₁c₃) - e^(-4/9) (1/n)^(4c₂/9),   c₂ ln n + 1 < 3n.
/// ```
pub fn theorem2_bound(n: usize, c1: f64, c2: f64, c3: f64) -> Result<BoundResult> {
    const NAME: &str = "theorem2_bound";
    if n == 0 {
        return Err(domain(NAME, "n", 0.0));
    }
    check_positive(NAME, "c1", c1)?;
    check_positive(NAME, "c2", c2)?;
    check_positive(NAME, "c3", c3)?;
    let ln_n = (n as f64).ln();
    let first = (-1.0 / 3.0 - (c2 / 3.0 - c1 * c3) * ln_n).exp();
    let second = (-4.0 / 9.0 - (4.0 * c2 / 9.0) * ln_n).exp();
    Ok(BoundResult::from_terms(
        first,
        second,
        c2 * ln_n + 1.0 < 3.0 * n as f64,
    ))
}

/// The event bounded by [`theorem2_bound`].
pub fn theorem2_event(n: usize, c2: f64, c3: f64) -> Result<SparsityEvent> {
    SparsityEvent::power_threshold(n, c3, c2 * (n as f64).ln())
}

/// `Dir(1/n)` bound `1 - n^-c₀` for threshold `n^-c₀` and ceiling `6c₀ ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Bound {
    pub result: BoundResult,
    pub event: SparsityEvent,
    /// The `(c₁, c₂, c₃) = (1, 6c₀, c₀)` instantiation it is derived from.
    pub via_theorem2: BoundResult,
    /// `via_theorem2.lower_bound >= 1 - n^-c₀`.
    pub closing_inequality_holds: bool,
}

pub fn theorem1_bound(n: usize, c0: f64) -> Result<Theorem1Bound> {
    const NAME: &str = "theorem1_bound";
    if n < 2 {
        return Err(domain(NAME, "n", n as f64));
    }
    if !(c0 >= 1.0 && c0.is_finite()) {
        return Err(domain(NAME, "c0", c0));
    }
    let ln_n = (n as f64).ln();
    let preconditions = 6.0 * c0 * ln_n + 1.0 < 3.0 * n as f64;
    let tail = (-c0 * ln_n).exp();
    let result = BoundResult::from_terms(tail, 0.0, preconditions);
    let via_theorem2 = theorem2_bound(n, 1.0, 6.0 * c0, c0)?;
    Ok(Theorem1Bound {
        result,
        event: theorem2_event(n, 6.0 * c0, c0)?,
        via_theorem2,
        closing_inequality_holds: via_theorem2.lower_bound >= result.lower_bound,
    })
}

/// Count ceiling for the `Dir(1/n²)` bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KChoice {
    /// `k = 5`
    Constant,
    /// `k = ln g(n)` for a caller-supplied `g`, passed as `ln g(n)`.
    LnG(f64),
}

impl KChoice {
    pub fn k(self) -> f64 {
        match self {
            KChoice::Constant => 5.0,
            KChoice::LnG(ln_g) => ln_g,
        }
    }
}

/// The `n`-free `Dir(1/n²)` bounds at threshold `n^-2`:
///
/// ```text
/// k = 5:        1 - e^(2/e - 2) - e^(-8/3)
/// k = ln g(n):  1 - e^(2/e - 1/3) g^(-1/3) - e^(-4/9) g^(-4/9),   1 <= ln g < 3n - 1
/// ```
pub fn theorem3_bound(n: usize, k_choice: KChoice) -> Result<BoundResult> {
    const NAME: &str = "theorem3_bound";
    if n < 3 {
        return Err(domain(NAME, "n", n as f64));
    }
    let two_over_e = 2.0 / std::f64::consts::E;
    match k_choice {
        KChoice::Constant => Ok(BoundResult::from_terms(
            (two_over_e - 2.0).exp(),
            (-8.0_f64 / 3.0).exp(),
            true,
        )),
        KChoice::LnG(ln_g) => {
            if !ln_g.is_finite() {
                return Err(domain(NAME, "ln g", ln_g));
            }
            let preconditions = 1.0 <= ln_g && ln_g < 3.0 * n as f64 - 1.0;
            Ok(BoundResult::from_terms(
                (two_over_e - 1.0 / 3.0 - ln_g / 3.0).exp(),
                (-4.0 / 9.0 - 4.0 * ln_g / 9.0).exp(),
                preconditions,
            ))
        }
    }
}

/// The event bounded by [`theorem3_bound`].
pub fn theorem3_event(n: usize, k_choice: KChoice) -> Result<SparsityEvent> {
    SparsityEvent::power_threshold(n, 2.0, k_choice.k())
}

/// `exp(-4np/3)`, the multiplicative Chernoff bound on
/// `Pr[Binomial(n, p) >= 3np]`.
pub fn chernoff_tail_bound(n: usize, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("chernoff_tail_bound", "p", p));
    }
    if n == 0 {
        return Err(domain("chernoff_tail_bound", "n", 0.0));
    }
    Ok((-4.0 * n as f64 * p / 3.0).exp())
}

/// `Pr[X_1 >= ε]` for `X ~ Dir(α)` in `n >= 2` dimensions, using the
/// `Beta(α, (n-1)α)` marginal. Computed as the complement branch of the
/// incomplete beta so that small tails keep their relative accuracy.
pub fn marginal_exceed_prob(n: usize, alpha: f64, epsilon: f64) -> Result<f64> {
    if n < 2 {
        return Err(domain("marginal_exceed_prob", "n", n as f64));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(domain("marginal_exceed_prob", "epsilon", epsilon));
    }
    let (_, upper) = reg_inc_beta_pair(alpha, (n - 1) as f64 * alpha, epsilon)?;
    Ok(upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::E;

    #[test]
    fn helper_at_unit_threshold() {
        let b = helper_bound(1.0, 0.37, 2.0, 2).unwrap();
        // 1 - e^-1 - e^-4/3 (mpmath)
        assert_relative_eq!(b.lower_bound, 0.368_523_420_712_830_9, max_relative = 1e-14);
        assert!(b.preconditions_met);
    }

    #[test]
    fn helper_at_theorem3_point() {
        let b = helper_bound(1.0 / 9.0, 1.0 / 9.0, 5.0, 3).unwrap();
        // 1 - 3^(2/3) e^-2 - e^(-8/3) (mpmath)
        assert_relative_eq!(b.lower_bound, 0.649_007_815_428_572_9, max_relative = 1e-13);
        assert_eq!(
            b.lower_bound,
            1.0 - b.terms.first_term - b.terms.second_term
        );
    }

    #[test]
    fn helper_precondition() {
        assert!(!helper_bound(0.5, 1.0, 12.0, 4).unwrap().preconditions_met);
        assert!(!helper_bound(0.5, 1.0, 11.0, 4).unwrap().preconditions_met);
        assert!(helper_bound(0.5, 1.0, 10.5, 4).unwrap().preconditions_met);
        assert!(helper_bound(0.0, 1.0, 1.0, 4).is_err());
        assert!(helper_bound(1.5, 1.0, 1.0, 4).is_err());
        assert!(helper_bound(0.5, 0.0, 1.0, 4).is_err());
        assert!(helper_bound(0.5, 1.0, -1.0, 4).is_err());
        assert!(helper_bound(0.5, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn theorem2_single_dimension() {
        let b = theorem2_bound(1, 1.0, 2.0, 3.0).unwrap();
        // 1 - e^(-1/3) - e^(-4/9) (mpmath)
        assert_relative_eq!(
            b.lower_bound,
            -0.357_711_699_003_743_83,
            max_relative = 1e-13
        );
        assert!(b.preconditions_met);
        assert!(b.is_vacuous());
    }

    #[test]
    fn theorem2_cancelling_exponent() {
        for n in [2usize, 10, 1000, 1 << 20] {
            let b = theorem2_bound(n, 2.0, 3.0, 0.5).unwrap();
            assert_eq!(b.terms.first_term, (-1.0_f64 / 3.0).exp());
        }
    }

    #[test]
    fn theorem2_matches_helper_instantiation() {
        let n = 100;
        let t2 = theorem2_bound(n, 1.0, 6.0, 1.0).unwrap();
        let h = helper_bound(1e-2, 1e-2, 6.0 * 100f64.ln(), n).unwrap();
        assert!((t2.lower_bound - h.lower_bound).abs() <= 1e-12);
        assert!(!theorem2_bound(4, 1.0, 30.0, 1.0).unwrap().preconditions_met);
    }

    #[test]
    fn theorem1_cases() {
        let t = theorem1_bound(100, 1.0).unwrap();
        assert_relative_eq!(t.result.lower_bound, 0.99, max_relative = 1e-14);
        assert_relative_eq!(t.event.epsilon(), 0.01, max_relative = 1e-14);
        assert_relative_eq!(t.event.k, 6.0 * 100f64.ln(), max_relative = 1e-15);
        assert!(t.result.preconditions_met && t.closing_inequality_holds);

        let t = theorem1_bound(2, 1.0).unwrap();
        assert_relative_eq!(t.result.lower_bound, 0.5, max_relative = 1e-15);
        assert!(t.result.preconditions_met);

        assert!(!theorem1_bound(2, 2.0).unwrap().result.preconditions_met);
        assert!(theorem1_bound(1, 1.0).is_err());
        assert!(theorem1_bound(10, 0.5).is_err());
    }

    #[test]
    fn theorem3_values() {
        let expected = 1.0 - (2.0 / E - 2.0).exp() - (-8.0_f64 / 3.0).exp();
        for n in [3usize, 64, 4096] {
            let b = theorem3_bound(n, KChoice::Constant).unwrap();
            assert_eq!(b.lower_bound, expected);
            assert!(b.lower_bound >= 0.64);
        }
        // mpmath: 0.6480629849266581
        assert_relative_eq!(expected, 0.648_062_984_926_658_1, max_relative = 1e-14);

        let g = theorem3_bound(3, KChoice::LnG(1.0)).unwrap();
        // 1 - e^(2/e - 2/3) - e^(-8/9) (mpmath)
        assert_relative_eq!(
            g.lower_bound,
            -0.482_647_307_425_827_3,
            max_relative = 1e-13
        );
        assert!(g.preconditions_met);
        assert!(
            !theorem3_bound(3, KChoice::LnG(0.5))
                .unwrap()
                .preconditions_met
        );
        assert!(
            !theorem3_bound(3, KChoice::LnG(8.0))
                .unwrap()
                .preconditions_met
        );
        assert!(theorem3_bound(2, KChoice::Constant).is_err());
    }

    #[test]
    fn theorem3_dominated_by_helper_at_three() {
        let h = helper_bound(1.0 / 9.0, 1.0 / 9.0, 5.0, 3).unwrap();
        let t = theorem3_bound(3, KChoice::Constant).unwrap();
        assert!(h.lower_bound >= t.lower_bound);
    }

    #[test]
    fn chernoff_values() {
        let k = 5.0;
        let n = 300;
        let p = (k + 1.0) / (3.0 * n as f64);
        assert_relative_eq!(
            chernoff_tail_bound(n, p).unwrap(),
            (-4.0 * (k + 1.0) / 9.0).exp(),
            max_relative = 1e-14
        );
        assert_eq!(chernoff_tail_bound(10, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            chernoff_tail_bound(30, 0.1).unwrap(),
            (-4.0_f64).exp(),
            max_relative = 1e-14
        );
        assert!(chernoff_tail_bound(10, 1.5).is_err());
    }

    #[test]
    fn marginal_closed_forms() {
        for eps in [0.01, 0.3, 0.9] {
            assert_relative_eq!(
                marginal_exceed_prob(2, 1.0, eps).unwrap(),
                1.0 - eps,
                max_relative = 1e-13
            );
        }
        assert_eq!(marginal_exceed_prob(2, 1.0, 1.0).unwrap(), 0.0);
        assert!(marginal_exceed_prob(1, 1.0, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn bounds_never_exceed_one(
            ln_eps in -50.0f64..=0.0,
            ln_alpha in -20.0f64..3.0,
            k in 0.0f64..1e4,
            n in 1usize..100_000,
        ) {
            let b = helper_bound_ln(ln_eps, ln_alpha.exp(), k, n).unwrap();
            prop_assert!(b.lower_bound <= 1.0);
        }

        #[test]
        fn helper_monotone(
            ln_eps in -30.0f64..=0.0,
            shrink in 0.0f64..10.0,
            ln_alpha in -15.0f64..2.0,
            k in 0.0f64..500.0,
            dk in 0.0f64..50.0,
            n in 1usize..5000,
        ) {
            let alpha = ln_alpha.exp();
            let base = helper_bound_ln(ln_eps, alpha, k, n).unwrap().lower_bound;
            let more_k = helper_bound_ln(ln_eps, alpha, k + dk, n).unwrap().lower_bound;
            let smaller_eps = helper_bound_ln(ln_eps - shrink, alpha, k, n).unwrap().lower_bound;
            prop_assert!(more_k >= base);
            prop_assert!(smaller_eps <= base);
        }
    }
}
