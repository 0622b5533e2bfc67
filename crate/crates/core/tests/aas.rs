use proptest::prelude::*;
use zeta_chords_core::aas::*;
use zeta_chords_core::hl_core::HlContext;
use zeta_chords_core::params::{chord_tolerance, short_window, u0, EPSILON};
use zeta_chords_core::special_fn::ZFunction;
use zeta_chords_core::zeros::find_zeros;

fn ctx() -> &'static HlContext {
    static CTX: std::sync::OnceLock<HlContext> = std::sync::OnceLock::new();
    CTX.get_or_init(|| HlContext::new(2e5).unwrap())
}

fn quick() -> AasSettings {
    AasSettings {
        grid: 20,
        ..AasSettings::default()
    }
}

#[test]
fn roots_satisfy_the_equation() {
    let s = AasSettings::default();
    for (t, tau) in [(10_003.3, 0.5), (10_003.3, 0.3), (5e4, 1.0), (20_001.0, 0.5)] {
        let roots = solve_u_for_tau(ctx(), t, tau, short_window(t, EPSILON), &s).unwrap();
        assert!(!roots.is_empty(), "T {t} tau {tau}");
        for u in roots {
            assert!((tau_hat(ctx(), t, u).unwrap() - tau).abs() <= 1e-4);
        }
    }
}

#[test]
fn finer_scans_keep_their_roots() {
    let coarse = AasSettings::default();
    let fine = AasSettings {
        n_scan: 2 * coarse.n_scan,
        ..coarse
    };
    let cases = [
        (10_003.3, 0.5),
        (10_003.3, 0.3),
        (5e4, 1.0),
        (5e4, 0.5),
        (20_001.0, 0.3),
        (1e5, 1.0),
        (31_000.0, 0.5),
        (44_444.4, 0.7),
        (70_000.0, 0.9),
        (12_345.0, 1.0),
    ];
    for (t, tau) in cases {
        let w = short_window(t, EPSILON);
        let a = solve_u_for_tau(ctx(), t, tau, w, &coarse).unwrap();
        let b = solve_u_for_tau(ctx(), t, tau, w, &fine).unwrap();
        for u in &a {
            assert!(b.iter().any(|v| (u - v).abs() <= 1e-5), "T {t} tau {tau}: lost {u}");
        }
    }
}

#[test]
fn self_target_is_recovered() {
    let t = 20_001.0;
    let w = short_window(t, EPSILON);
    let u_star = 4.619_950_451_502_494;
    let tau = tau_hat(ctx(), t, u_star).unwrap();
    let s = AasSettings {
        eta: 0.0,
        ..AasSettings::default()
    };
    let roots = solve_u_for_tau(ctx(), t, tau, w, &s).unwrap();
    assert!(roots.iter().any(|u| (u - u_star).abs() <= 1e-6), "{roots:?}");
}

#[test]
fn solver_contract_errors() {
    let s = AasSettings::default();
    assert!(solve_u_for_tau(ctx(), 1e4, 0.95, 1.0, &s).is_err());
    assert!(solve_u_for_tau(ctx(), 1e4, 0.5, 10.0, &s).is_err());
}

#[test]
fn certification_basics() {
    let s = AasSettings::default();
    let c = AasCandidate::new(
        10_003.3,
        0.403_126_046_116_489,
        0.5,
        AnchorKind::Gamma,
        10_000.065_345_414_569,
    );
    let once = certify(ctx(), &c, &s).unwrap();
    assert!(once.certified);
    assert_eq!(certify(ctx(), &once, &s).unwrap(), once);
    let strict = AasSettings { kappa: 0.0, ..s };
    let none = certify(ctx(), &c, &strict).unwrap();
    assert!(none.residual > 0.0 && !none.certified);
    assert!((chord_tolerance(1e4, 3.0) - 0.723_206_76).abs() < 1e-8);
}

#[test]
fn parallel_scan_respects_ranges_and_grows_with_the_grid() {
    let s = quick();
    let a = scan_parallel(ctx(), 1e4, &s).unwrap();
    let b = scan_parallel(ctx(), 1e4, &AasSettings { grid: 40, ..s }).unwrap();
    assert!(!a.candidates.is_empty());
    for c in a.candidates.iter().chain(&b.candidates) {
        assert!(c.certified && c.in_range(s.epsilon, s.eta));
        assert_eq!(c.anchor_kind, AnchorKind::T0);
        assert!(c.t_tilde >= 1e4 && c.t_tilde <= 1e4 + 1.1 * u0(1e4, EPSILON));
        assert!(c.u_tilde > 0.0 && c.u_tilde <= short_window(1e4, EPSILON));
    }
    // Per unit of T̃, the denser grid finds at least as many.
    assert!(b.candidates.len() >= a.candidates.len());
    assert!(scan_parallel(ctx(), 500.0, &s).is_err());
}

#[test]
fn rotating_scan_respects_ranges() {
    let z = ZFunction::new();
    let zeros = find_zeros(&z, 1e4, 1e4 + 5.0).unwrap();
    let g = zeros.nearest_zero_at_or_above(1e4).unwrap();
    let s = quick();
    for tau in [s.eta, 0.5, 1.0 - s.eta] {
        let r = scan_rotating(ctx(), g, tau, &s).unwrap();
        assert_eq!(r.grid_points, s.grid - 1);
        for c in &r.candidates {
            assert!(c.certified && c.in_range(s.epsilon, s.eta));
            assert!(c.t_tilde > g && c.t_tilde < g + 1.1 * u0(g, EPSILON));
            assert!(c.u_tilde < short_window(g, EPSILON));
        }
    }
    assert!(scan_rotating(ctx(), g, 1.0, &s).is_err());
    assert!(scan_rotating(ctx(), g, 0.05, &s).is_err());
}

#[test]
fn density_report_of_a_scan() {
    let r = scan_parallel(ctx(), 1e4, &AasSettings::default()).unwrap();
    assert!(r.candidates.len() >= 50);
    let h = density_report(&r.candidates, 10).unwrap();
    assert_eq!(h.counts.iter().sum::<usize>(), r.candidates.len());
    assert_eq!(h.count, r.candidates.len());
    assert!(h.interior_gaps() <= 1);
    let one = density_report(&r.candidates, 1).unwrap();
    assert_eq!(one.counts, vec![r.candidates.len()]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn certification_never_accepts_out_of_range_pairs(
        dt in -5.0f64..35.0,
        u in -0.5f64..6.0,
        tau in 0.0f64..1.0,
        gamma_anchor in proptest::bool::ANY,
    ) {
        let anchor = 1e4;
        let kind = if gamma_anchor { AnchorKind::Gamma } else { AnchorKind::T0 };
        let mut c = AasCandidate::new(anchor + dt, u, tau, kind, anchor);
        c.residual = 0.0;
        let ok = c.in_range(EPSILON, 0.1);
        let top = anchor + 1.1 * u0(anchor, EPSILON);
        let w = short_window(anchor, EPSILON);
        let tau_ok = tau == 1.0 || (0.1..=0.9).contains(&tau);
        if ok {
            prop_assert!(tau_ok && u > 0.0 && c.t_tilde <= top && c.t_tilde >= anchor && u <= w);
        }
        if u > 0.0 && u < w && tau_ok && c.t_tilde > anchor && c.t_tilde < top {
            prop_assert!(ok);
        }
    }
}
