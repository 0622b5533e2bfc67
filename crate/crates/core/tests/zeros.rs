#[allow(dead_code)]
#[path = "oracle/reference.rs"]
mod reference;

use proptest::prelude::*;
use zeta_chords_core::special_fn::ZFunction;
use zeta_chords_core::zeros::{find_zeros, theta_count, ZeroTable, ZERO_TOL};

fn z() -> &'static ZFunction {
    static Z: std::sync::OnceLock<ZFunction> = std::sync::OnceLock::new();
    Z.get_or_init(ZFunction::new)
}

fn table_50_1000() -> &'static ZeroTable {
    static T: std::sync::OnceLock<ZeroTable> = std::sync::OnceLock::new();
    T.get_or_init(|| find_zeros(z(), 50.0, 1000.0).unwrap())
}

#[test]
fn low_zeros_match_reference() {
    let t = find_zeros(z(), 50.0, 100.0).unwrap();
    assert!(t.complete);
    let want: Vec<f64> = reference::ZEROS
        .iter()
        .copied()
        .filter(|&g| g > 50.0 && g < 100.0)
        .collect();
    assert_eq!(t.zeros.len(), want.len());
    for (g, w) in t.zeros.iter().zip(&want) {
        assert!((g - w).abs() < 1e-6);
    }
    // N(50) = 10 while ϑ(50)/π + 1 = 9.42, so the rounded theta count of
    // (50, 100) is 20 against 19 actual zeros.
    assert_eq!(theta_count(50.0, 100.0), 20);
    assert!((t.zeros.len() as i64 - theta_count(50.0, 100.0)).abs() <= 1);
}

#[test]
fn zeros_near_ten_thousand_match_reference() {
    let t = find_zeros(z(), 1e4, 1e4 + 30.0).unwrap();
    assert!(t.complete);
    assert_eq!(
        t.zeros,
        t.zeros
            .iter()
            .map(|&g| zeta_chords_core::zeros::quantize(g))
            .collect::<Vec<_>>()
    );
    assert_eq!(t.zeros.len(), reference::ZEROS_NEAR_1E4.len());
    for (g, w) in t.zeros.iter().zip(reference::ZEROS_NEAR_1E4) {
        assert!((g - w).abs() < 2e-9, "{g} vs {w}");
    }
}

#[test]
fn table_to_one_thousand_is_complete_and_counted() {
    let t = table_50_1000();
    assert!(t.complete, "suspects: {:?}", t.suspects);
    assert!((t.zeros.len() as i64 - t.theta_count()).abs() <= 1);
}

#[test]
fn every_zero_is_a_sign_change() {
    let t = table_50_1000();
    for &g in &t.zeros {
        assert!(z().eval(g).abs() <= 1e-6, "Z({g}) = {}", z().eval(g));
        let a = z().eval(g - 1e-8 - ZERO_TOL);
        let b = z().eval(g + 1e-8 + ZERO_TOL);
        assert!(a * b < 0.0, "no sign change at {g}");
    }
}

#[test]
fn zeros_are_sorted_without_duplicates() {
    let t = table_50_1000();
    assert!(t.zeros.windows(2).all(|w| w[1] - w[0] > ZERO_TOL));
    assert!(t.zeros.iter().all(|&g| g > t.lo && g < t.hi));
}

#[test]
fn tables_are_additive() {
    let whole = find_zeros(z(), 5000.0, 5100.0).unwrap();
    let left = find_zeros(z(), 5000.0, 5047.3).unwrap();
    let right = find_zeros(z(), 5047.3, 5100.0).unwrap();
    let joined: Vec<f64> = left.zeros.iter().chain(&right.zeros).copied().collect();
    assert_eq!(whole.zeros.len(), joined.len());
    for (a, b) in whole.zeros.iter().zip(&joined) {
        assert!((a - b).abs() <= 1e-9);
    }
}

#[test]
fn nearest_zero_lookup() {
    let t = table_50_1000();
    assert_eq!(t.nearest_zero_at_or_above(50.0).unwrap(), t.zeros[0]);
    let g = t.zeros[17];
    assert_eq!(t.nearest_zero_at_or_above(g).unwrap(), g);
    assert!(t.nearest_zero_at_or_above(1000.5).is_err());
    assert!(t.nearest_zero_at_or_above(10.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lookup_is_monotone(a in 50.0f64..990.0, b in 50.0f64..990.0) {
        let t = table_50_1000();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (x, y) = (t.nearest_zero_at_or_above(lo).unwrap(), t.nearest_zero_at_or_above(hi).unwrap());
        prop_assert!(x <= y);
        prop_assert!(x >= lo);
    }
}
