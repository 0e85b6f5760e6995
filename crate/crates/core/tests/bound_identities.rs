use dirsparse::bounds::{
    helper_bound, helper_bound_ln, power_threshold_ln, theorem1_bound, theorem2_bound,
    theorem3_bound, KChoice,
};

const CS: [f64; 4] = [0.5, 1.0, 2.0, 6.0];

/// Vacuous bounds reach magnitudes in the thousands; there the tolerance is
/// relative.
#[test]
fn theorem2_is_helper_instantiation() {
    for n in (2..=1000).step_by(7).chain([1000]) {
        let ln_n = (n as f64).ln();
        for c1 in CS {
            for c2 in CS {
                for c3 in CS {
                    let t2 = theorem2_bound(n, c1, c2, c3).unwrap();
                    let h = helper_bound_ln(power_threshold_ln(n, c3), c1 / n as f64, c2 * ln_n, n)
                        .unwrap();
                    assert!(
                        (t2.lower_bound - h.lower_bound).abs()
                            <= 1e-12 * h.lower_bound.abs().max(1.0),
                        "n={n} c=({c1},{c2},{c3}): {} vs {}",
                        t2.lower_bound,
                        h.lower_bound
                    );
                    assert_eq!(t2.preconditions_met, h.preconditions_met);
                }
            }
        }
    }
}

#[test]
fn theorem1_dominated_by_its_instantiation() {
    for n in 2..=5000 {
        for c0 in [1.0, 1.5, 2.0, 3.0, 4.0, 6.0] {
            let t1 = theorem1_bound(n, c0).unwrap();
            if t1.result.preconditions_met {
                assert!(t1.closing_inequality_holds, "n={n} c0={c0}");
                assert!(t1.via_theorem2.lower_bound >= t1.result.lower_bound);
            }
        }
    }
}

#[test]
fn theorem3_dominated_by_helper() {
    let max = (2.0 / std::f64::consts::E).exp();
    for n in 3..=20_000usize {
        let nf = n as f64;
        assert!(nf.powf(2.0 / nf) <= max * (1.0 + 1e-15), "n = {n}");
        let alpha = 1.0 / (nf * nf);
        for choice in [KChoice::Constant, KChoice::LnG(nf.ln()), KChoice::LnG(1.0)] {
            let t3 = theorem3_bound(n, choice).unwrap();
            if !t3.preconditions_met {
                continue;
            }
            let h = helper_bound(1.0 / (nf * nf), alpha, choice.k(), n).unwrap();
            assert!(h.lower_bound >= t3.lower_bound - 1e-15, "n={n} {choice:?}");
        }
    }
}

#[test]
fn scalar_inequality_peaks_at_e() {
    // z^(-z) on (0, 1] peaks at z = 1/e
    let peak = (1.0 / std::f64::consts::E).exp();
    for i in 1..=100_000 {
        let z = i as f64 / 100_000.0;
        assert!(z.powf(-z) <= peak * (1.0 + 1e-15));
    }
}
