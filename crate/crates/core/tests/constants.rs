use approx::assert_relative_eq;

use reifenberg::constants::{base_constant, final_constant, script_l, step_constant, Constants};
use reifenberg::ConstantLedger;

/// `K^m_0` at `N` by iterating both lower bounds from the base value, with
/// the wall constant taken from the same oracle one dimension down.
fn oracle(m: usize, k: usize, big_n: usize) -> f64 {
    if m == 1 {
        return 1.0;
    }
    let kp = oracle(m - 1, 0, big_n - 1);
    let c = 1.0 + 2.0 * (2.0 * kp).powf(1.0 / (m as f64 - 1.0));
    let mut v = 2f64.powi(2 * m as i32 - 1) * (big_n as f64).sqrt();
    for _ in k..big_n {
        v = f64::max(v * c * 2.0 * (1.0 + 2.0 * kp), v * c + kp);
    }
    v
}

#[test]
fn m2_closed_form() {
    // with K¹₀ = 1 every step multiplies by 30
    for big_n in 2..=5 {
        for k in 0..=big_n {
            let want = 8.0 * (big_n as f64).sqrt() * 30f64.powi((big_n - k) as i32);
            let got = Constants::default().constant(2, k, big_n).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
    }
    assert_relative_eq!(final_constant(2, 3).unwrap(), 216000.0 * 3f64.sqrt(), max_relative = 1e-12);
}

#[test]
fn higher_m_matches_the_recurrence() {
    for m in 2..=4 {
        for big_n in m..=5 {
            for k in 0..=big_n {
                let got = Constants::default().constant(m, k, big_n).unwrap();
                assert_relative_eq!(got, oracle(m, k, big_n), max_relative = 1e-12);
            }
        }
    }
}

#[test]
fn step_takes_the_larger_bound() {
    // m = 2: 30·K dominates 5·K + 1 once K ≥ 1/25
    assert_relative_eq!(step_constant(2, 2, 1.0).unwrap(), 30.0);
    assert_relative_eq!(step_constant(2, 2, 0.01).unwrap(), 1.05);
    assert_relative_eq!(step_constant(2, 2, 0.04).unwrap(), 1.2, max_relative = 1e-12);
}

#[test]
fn script_l_values() {
    assert_relative_eq!(script_l(2, 2, 1.0).unwrap(), 5.0);
    assert_relative_eq!(script_l(2, 2, 0.3).unwrap(), 1.5, max_relative = 1e-15);
    let k2 = final_constant(2, 2).unwrap();
    assert_relative_eq!(script_l(3, 3, 0.7).unwrap(), (1.0 + 2.0 * (2.0 * k2).sqrt()) * 0.7, max_relative = 1e-12);
    assert!(script_l(2, 2, 0.0).is_err());
}

#[test]
fn final_constant_grows_with_n() {
    for m in 2..=3 {
        let ks: Vec<f64> = (m..=5).map(|n| final_constant(m, n).unwrap()).collect();
        assert!(ks.windows(2).all(|p| p[0] < p[1]), "{ks:?}");
    }
}

#[test]
fn base_entries() {
    for m in 2..=3 {
        for n in m..=4 {
            assert_relative_eq!(
                base_constant(m, n).unwrap(),
                2f64.powi(2 * m as i32 - 1) * (n as f64).sqrt(),
                max_relative = 1e-15
            );
        }
    }
    assert!(base_constant(1, 2).is_err());
    assert!(base_constant(3, 2).is_err());
}

#[test]
fn ledger_is_finite_and_reproducible() {
    let a = ConstantLedger::build(&Constants::default(), 3, 4).unwrap();
    let b = ConstantLedger::build(&Constants::default(), 3, 4).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.entries.iter().all(|e| e.value.is_finite() && e.value > 0.0));
    assert_relative_eq!(a.final_constant, final_constant(3, 4).unwrap());
}

#[test]
fn convention_scales_through() {
    let c = Constants::new(2.0).unwrap();
    assert_eq!(c.constant(1, 0, 3).unwrap(), 2.0);
    assert!(c.final_constant(2, 2).unwrap() > final_constant(2, 2).unwrap());
    assert!(Constants::new(0.0).is_err());
}
