//! Run-wide parameters and the windows derived from them.

use crate::math;

/// Default ε in the exponents of the segment windows.
pub const EPSILON: f64 = 0.01;
/// Default η; directions τ are taken from [η, 1 − η].
pub const ETA: f64 = 0.1;
/// Default κ in the tolerance κ·ln ln T/ln T.
pub const KAPPA: f64 = 3.0;
/// Quadrature tolerance for verification runs.
pub const REL_TOL_VERIFY: f64 = 1e-8;
/// Quadrature tolerance for sweeps.
pub const REL_TOL_SWEEP: f64 = 1e-6;

/// Upper end of the short-segment range, T^{1/6 − ε/2}.
#[inline]
pub fn short_window(t: f64, epsilon: f64) -> f64 {
    math::powf(t, 1.0 / 6.0 - 0.5 * epsilon)
}

/// U₀ = T^{1/3 + 2ε}.
#[inline]
pub fn u0(t: f64, epsilon: f64) -> f64 {
    math::powf(t, 1.0 / 3.0 + 2.0 * epsilon)
}

/// κ·ln ln T/ln T.
#[inline]
pub fn chord_tolerance(t: f64, kappa: f64) -> f64 {
    let l = math::ln(t);
    kappa * math::ln(l) / l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_exponents() {
        let e = (1.0f64 / 3.0 + 0.02) * 4.0;
        assert!((u0(1e4, 0.01) - 10f64.powf(e)).abs() < 1e-9);
        assert!((short_window(1e6, 0.0) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn tolerance_at_ten_thousand() {
        assert!((chord_tolerance(1e4, 3.0) - 0.723_206_76).abs() < 1e-8);
    }
}
