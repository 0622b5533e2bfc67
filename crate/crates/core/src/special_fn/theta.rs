//! The Riemann–Siegel theta function ϑ(t) = −½t ln π + Im ln Γ(¼ + ½it).
//!
//! The exact path evaluates Im ln Γ on the line Re = ¼ with Stirling's
//! series. Arguments with |w| < 10 are first shifted up by the recurrence
//! Γ(w+1) = wΓ(w); with |w| ≥ 10 the eight Bernoulli terms used below leave a
//! truncation error under 2·10⁻¹⁸, so the exact path is good to ~10⁻¹⁵
//! absolute for every t ≥ 1 (the remaining error is rounding).
//!
//! The large term y·ln|w| is carried in double-double so that ϑ keeps its
//! fractional digits at t ≈ 10⁶, where ϑ itself is about 5.5·10⁶.

use crate::complex::Complex;
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::math;

/// Largest abscissa accepted by [`ThetaMode::Exact`].
pub const EXACT_T_MAX: f64 = 1e12;

/// Stirling's series for ln Γ: B₂ₖ / (2k(2k−1)), k = 1..8.
const LGAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// The digamma series: B₂ₖ / 2k, k = 1..8.
const DIGAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

const MIN_STIRLING_MODULUS: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaMode {
    /// Through the log-gamma definition.
    Exact,
    /// ½t ln(t/2π) − ½t − π/8, with ϑ′ = ½ ln(t/2π).
    Asymptotic,
}

/// Value and derivative of ϑ at `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaEval {
    pub t: f64,
    pub theta: f64,
    pub dtheta: f64,
}

pub fn theta(t: f64, mode: ThetaMode) -> Result<ThetaEval> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            what: "theta needs t > 0",
            value: t,
        });
    }
    match mode {
        ThetaMode::Exact => {
            if t > EXACT_T_MAX {
                return Err(Error::Precondition {
                    what: "exact theta is limited by its precision budget",
                    value: t,
                    limit: EXACT_T_MAX,
                });
            }
            Ok(ThetaEval {
                t,
                theta: theta_dd(t).to_f64(),
                dtheta: dtheta(t),
            })
        }
        ThetaMode::Asymptotic => Ok(ThetaEval {
            t,
            theta: theta_asymptotic_dd(t).to_f64(),
            dtheta: 0.5 * (math::ln(t) - math::LN_TAU),
        }),
    }
}

/// Number of unit shifts that bring ¼ + iy to modulus at least 10.
#[inline]
fn shift_count(y: f64) -> u32 {
    let r2 = MIN_STIRLING_MODULUS * MIN_STIRLING_MODULUS;
    if y * y >= r2 - 0.0625 {
        0
    } else {
        math::ceil(math::sqrt(r2 - y * y) - 0.25).max(0.0) as u32
    }
}

/// Exact ϑ(t) in double-double. No argument checking; `t > 0`.
pub fn theta_dd(t: f64) -> DoubleDouble {
    let y = 0.5 * t;
    let m = shift_count(y);
    let a = 0.25 + m as f64;

    // Im[(w − ½) ln w − w] = y·ln|w| + (a − ½)·arg w − y  for w = a + iy.
    let modulus_sq = DoubleDouble::prod(y, y).add_f64(a * a);
    let ln_modulus = modulus_sq.ln().scale(0.5);
    let w = Complex::new(a, y);
    let mut small = (a - 0.5) * w.arg();

    let inv = w.recip();
    let inv2 = inv * inv;
    let mut power = inv;
    for c in LGAMMA_SERIES {
        small += c * power.im;
        power = power * inv2;
    }
    // ln Γ(z) = ln Γ(z + m) − Σ ln(z + k)
    for k in 0..m {
        small -= math::atan2(y, 0.25 + k as f64);
    }

    (ln_modulus - DoubleDouble::LN_PI).mul_f64(y).add_f64(-y).add_f64(small)
}

/// ϑ′(t) = −½ ln π + ½ Re ψ(¼ + ½it).
pub fn dtheta(t: f64) -> f64 {
    let y = 0.5 * t;
    let m = shift_count(y);
    let w = Complex::new(0.25 + m as f64, y);
    let inv = w.recip();
    let inv2 = inv * inv;
    let mut psi = w.ln() - inv.scale(0.5);
    let mut power = inv2;
    for c in DIGAMMA_SERIES {
        psi = psi - power.scale(c);
        power = power * inv2;
    }
    let mut re = psi.re;
    for k in 0..m {
        re -= Complex::new(0.25 + k as f64, y).recip().re;
    }
    0.5 * (re - DoubleDouble::LN_PI.hi)
}

/// ½t ln(t/2π) − ½t − π/8 in double-double.
pub fn theta_asymptotic_dd(t: f64) -> DoubleDouble {
    let ln_ratio = DoubleDouble::from_f64(t).ln() - DoubleDouble::LN_TAU;
    ln_ratio.add_f64(-1.0).mul_f64(0.5 * t) - DoubleDouble::FRAC_PI_4.scale(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asym(t: f64) -> f64 {
        0.5 * t * (t / (2.0 * core::f64::consts::PI)).ln() - 0.5 * t - core::f64::consts::PI / 8.0
    }

    #[test]
    fn asymptotic_mode_is_the_closed_form() {
        let ev = theta(1e4, ThetaMode::Asymptotic).unwrap();
        assert!((ev.theta - asym(1e4)).abs() < 1e-9);
        assert!((ev.dtheta - 0.5 * (1e4 / (2.0 * core::f64::consts::PI)).ln()).abs() < 1e-15);
    }

    #[test]
    fn exact_and_asymptotic_agree_at_100() {
        let e = theta(100.0, ThetaMode::Exact).unwrap();
        let a = theta(100.0, ThetaMode::Asymptotic).unwrap();
        assert!((e.theta - a.theta).abs() <= 1.0 / 600.0);
    }

    #[test]
    fn derivative_is_one_where_log_ratio_is_two() {
        let t = 2.0 * core::f64::consts::PI * core::f64::consts::E.powi(2);
        let ev = theta(t, ThetaMode::Exact).unwrap();
        assert!((ev.dtheta - 1.0).abs() <= 1.0 / t);
    }

    #[test]
    fn non_positive_t_is_a_domain_error() {
        for t in [0.0, -1.0, f64::NAN] {
            assert!(matches!(theta(t, ThetaMode::Exact), Err(Error::Domain { .. })));
        }
        assert!(matches!(theta(2e12, ThetaMode::Exact), Err(Error::Precondition { .. })));
    }

    #[test]
    fn shift_boundary_is_continuous() {
        // y = √(100 − 1/16) is where the shift count drops to zero.
        let t0 = 2.0 * (100.0f64 - 0.0625).sqrt();
        let below = theta_dd(t0 - 1e-9).to_f64();
        let above = theta_dd(t0 + 1e-9).to_f64();
        let slope = dtheta(t0);
        assert!((above - below - 2e-9 * slope).abs() < 1e-12);
    }
}
