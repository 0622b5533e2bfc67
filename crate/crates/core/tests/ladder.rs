use zeta_chords_core::hl_core::{HlContext, Segment};
use zeta_chords_core::ladder::*;
use zeta_chords_core::params::{EPSILON, KAPPA};
use zeta_chords_core::verifier::{Envelopes, BALA_COEFF};
use zeta_chords_core::Error;

fn ctx() -> &'static HlContext {
    static CTX: std::sync::OnceLock<HlContext> = std::sync::OnceLock::new();
    CTX.get_or_init(|| HlContext::new(2e5).unwrap())
}

/// Enough for T ≤ 2000 with the doubled bracket.
fn table() -> &'static MomentTable {
    static T: std::sync::OnceLock<MomentTable> = std::sync::OnceLock::new();
    T.get_or_init(|| MomentTable::build(ctx(), 4.5e4, STEP, 1e-10).unwrap())
}

#[test]
fn cumulative_basics() {
    let c = table().cumulative();
    assert_eq!(c.values()[0], 0.0);
    assert!(c.values().windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(c.cumulative_z2(ctx(), 0.0, 1e-10).unwrap(), 0.0);
    let (a, b) = (1234.5, 2345.6);
    let diff = c.cumulative_z2(ctx(), b, 1e-10).unwrap() - c.cumulative_z2(ctx(), a, 1e-10).unwrap();
    let direct = ctx()
        .integrate_z2(&Segment::new(a, b - a, EPSILON).unwrap(), 1e-10)
        .unwrap();
    assert!((diff - direct).abs() <= 2.0 * 1e-10 * diff.abs().max(1.0) * 10.0);
    assert!(matches!(c.cumulative_z2(ctx(), 5e4, 1e-10), Err(Error::Range { .. })));
}

#[test]
fn cumulative_follows_the_mean_value() {
    let t: f64 = 1e4;
    let v = table().cumulative().cumulative_z2(ctx(), t, 1e-10).unwrap();
    let main = t * t.ln() + BALA_COEFF * t;
    assert!((0.98..=1.02).contains(&(v / main)));
}

#[test]
fn half_step_checkpoints_agree() {
    let half = CumulativeTable::build(ctx(), 1e4, STEP / 2.0, 1e-10).unwrap();
    for t in [1e3, 1e4] {
        let a = table().cumulative().cumulative_z2(ctx(), t, 1e-10).unwrap();
        let b = half.cumulative_z2(ctx(), t, 1e-10).unwrap();
        assert!((a - b).abs() <= 10.0 * 1e-10 * a, "T {t}: {a} vs {b}");
    }
}

#[test]
fn weighted_integral_increases() {
    let vals: Vec<f64> = [50.0, 100.0, 200.0, 400.0]
        .iter()
        .map(|&x| weighted_integral(ctx(), table(), x, 1e-10).unwrap())
        .collect();
    assert!(vals.windows(2).all(|w| w[1] > w[0]), "{vals:?}");
    assert!(weighted_integral(ctx(), table(), 2.0, 1e-10).is_err());
}

#[test]
fn weighted_integral_is_continuous_at_the_direct_switch() {
    let below = weighted_integral(ctx(), table(), X_DIRECT * (1.0 - 1e-12), 1e-10).unwrap();
    let above = weighted_integral(ctx(), table(), X_DIRECT, 1e-10).unwrap();
    assert!((below - above).abs() <= 1e-8 * above);
}

#[test]
fn upper_limit_arithmetic() {
    assert!((mu(100.0) - 700.0 * 100f64.ln()).abs() < 1e-9);
    assert!((mu(100.0) - 3223.6).abs() < 0.05);
    assert!((-2.0 * mu(100.0) / 100.0).exp() < 1e-28);
}

#[test]
fn ladder_samples() {
    let mut last = 0.0;
    for t in [500.0, 1000.0, 2000.0] {
        let s = solve_ladder(ctx(), table(), t, 1e-10).unwrap();
        assert!(s.equation_residual <= 1e-6);
        let integral = table().cumulative().cumulative_z2(ctx(), t, 1e-10).unwrap();
        let w = weighted_integral(ctx(), table(), s.phi, 1e-10).unwrap();
        assert!((w - integral).abs() / integral <= 1e-6);
        assert!(s.phi >= last);
        assert!(s.phi / t > 1.8 && s.phi / t < 2.0, "phi/T = {}", s.phi / t);
        last = s.phi;
    }
    assert!(matches!(
        solve_ladder(ctx(), table(), 150.0, 1e-10),
        Err(Error::Domain { .. })
    ));
}

#[test]
fn almost_exact_calibration() {
    let s1 = solve_ladder(ctx(), table(), 1e3, 1e-10).unwrap();
    let i1 = table().cumulative().cumulative_z2(ctx(), 1e3, 1e-10).unwrap();
    let c0 = calibrate_c0(i1, &s1);
    let c = Envelopes::default().c_almost_exact;
    assert_eq!(almost_exact_check(i1, &s1, c0, c).residual, 0.0);
    // Refitting at 2·10³ moves c0 by less than the envelope at 10³.
    let s2 = solve_ladder(ctx(), table(), 2e3, 1e-10).unwrap();
    let i2 = table().cumulative().cumulative_z2(ctx(), 2e3, 1e-10).unwrap();
    let c0_2 = calibrate_c0(i2, &s2);
    assert!((c0_2 - c0).abs() <= c * 1e3f64.ln() / 1e3);
    assert!(almost_exact_check(i2, &s2, c0, c).pass);
}

#[test]
fn multiplicative_window() {
    let t: f64 = 1e4;
    let r = multiplicative_check(ctx(), t, 3.0, KAPPA, EPSILON, 1e-8).unwrap();
    assert!(r.pass, "{} > {}", r.residual, r.bound);
    assert!(r.diagnostic("ratio_deviation").unwrap() <= 1e-12);
    let micro = multiplicative_check(ctx(), t, 0.01, KAPPA, EPSILON, 1e-8).unwrap();
    assert!(micro.residual.is_finite() && micro.bound > 0.0);
    let edge = t / t.ln();
    assert!(multiplicative_check(ctx(), t, edge, KAPPA, EPSILON, 1e-6).is_ok());
    assert!(matches!(
        multiplicative_check(ctx(), t, edge * 1.001, KAPPA, EPSILON, 1e-6),
        Err(Error::Precondition { .. })
    ));
}
