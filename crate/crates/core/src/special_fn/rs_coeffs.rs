//! Correction terms C₀…C₄ of the Riemann–Siegel remainder.
//!
//! All five are linear combinations of derivatives of
//! Ψ(p) = cos 2π(p² − p − 1/16) / cos 2πp, an entire function. Its Taylor
//! coefficients about p = ½ are obtained once, numerically, from Cauchy's
//! integral on the unit circle; each Cₖ is then stored as a polynomial in
//! z = p − ½ and evaluated by Horner's rule.

use alloc::vec::Vec;

use crate::complex::Complex;
use crate::math::{self, PI};

/// Taylor degree kept for Ψ.
const PSI_DEGREE: usize = 64;
/// Sample points on the Cauchy circle.
const CAUCHY_POINTS: usize = 128;

/// (derivative order, coefficient) pairs; Cₖ = Σ coeff · Ψ⁽ᵐ⁾.
fn combination(k: usize) -> Vec<(usize, f64)> {
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;
    match k {
        0 => alloc::vec![(0, 1.0)],
        1 => alloc::vec![(3, -1.0 / (96.0 * pi2))],
        2 => alloc::vec![(2, 1.0 / (64.0 * pi2)), (6, 1.0 / (18_432.0 * pi4))],
        3 => alloc::vec![
            (1, -1.0 / (64.0 * pi2)),
            (5, -1.0 / (3840.0 * pi4)),
            (9, -1.0 / (5_308_416.0 * pi6)),
        ],
        4 => alloc::vec![
            (0, 1.0 / (128.0 * pi2)),
            (4, 19.0 / (24_576.0 * pi4)),
            (8, 11.0 / (5_898_240.0 * pi6)),
            (12, 1.0 / (2_038_431_744.0 * pi8)),
        ],
        _ => unreachable!(),
    }
}

/// Ψ as a function of z = p − ½: −cos(2πz² − 5π/8) / cos(2πz).
fn psi(z: Complex) -> Complex {
    let num = (z * z).scale(2.0 * PI) - Complex::new(5.0 * PI / 8.0, 0.0);
    -(num.cos() / z.scale(2.0 * PI).cos())
}

/// Direct evaluation of Ψ at a real p, for checks away from p = ¼, ¾.
pub fn psi_closed_form(p: f64) -> f64 {
    math::cos(2.0 * PI * (p * p - p - 1.0 / 16.0)) / math::cos(2.0 * PI * p)
}

fn psi_taylor() -> [f64; PSI_DEGREE + 1] {
    let mut samples = [Complex::default(); CAUCHY_POINTS];
    for (j, s) in samples.iter_mut().enumerate() {
        let angle = 2.0 * PI * j as f64 / CAUCHY_POINTS as f64;
        *s = psi(Complex::cis(angle));
    }
    let mut coeffs = [0.0; PSI_DEGREE + 1];
    for (k, c) in coeffs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, s) in samples.iter().enumerate() {
            let angle = -2.0 * PI * ((j * k) % CAUCHY_POINTS) as f64 / CAUCHY_POINTS as f64;
            acc += (*s * Complex::cis(angle)).re;
        }
        *c = acc / CAUCHY_POINTS as f64;
    }
    // Ψ is even in z; odd coefficients are rounding noise.
    for k in (1..=PSI_DEGREE).step_by(2) {
        coeffs[k] = 0.0;
    }
    coeffs
}

/// Polynomials (in z = p − ½) for C₀ … C₄.
#[derive(Clone, Debug)]
pub struct RsCorrection {
    series: [Vec<f64>; 5],
}

impl Default for RsCorrection {
    fn default() -> Self {
        Self::new()
    }
}

impl RsCorrection {
    pub fn new() -> Self {
        let psi = psi_taylor();
        let build = |k: usize| {
            let mut out = alloc::vec![0.0; PSI_DEGREE + 1];
            for (order, weight) in combination(k) {
                // d^m/dz^m Σ aⱼ zʲ = Σ aⱼ₊ₘ (j+m)!/j! zʲ
                for j in 0..=(PSI_DEGREE - order) {
                    let mut falling = 1.0;
                    for i in 0..order {
                        falling *= (j + order - i) as f64;
                    }
                    out[j] += weight * psi[j + order] * falling;
                }
            }
            while out.len() > 1 && out.last().is_some_and(|c| c.abs() < 1e-24) {
                out.pop();
            }
            out
        };
        Self {
            series: [build(0), build(1), build(2), build(3), build(4)],
        }
    }

    /// Cₖ(p).
    pub fn coefficient(&self, k: usize, p: f64) -> f64 {
        horner(&self.series[k], p - 0.5)
    }

    /// Σₖ Cₖ(p)·a⁻ᵏ, the bracket of the remainder term.
    #[inline]
    pub fn remainder_sum(&self, p: f64, inv_a: f64) -> f64 {
        let z = p - 0.5;
        let mut acc = 0.0;
        for series in self.series.iter().rev() {
            acc = acc * inv_a + horner(series, z);
        }
        acc
    }
}

#[inline]
fn horner(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c0_matches_closed_form() {
        let rs = RsCorrection::new();
        for p in [0.0, 0.1, 0.2, 0.3, 0.45, 0.5, 0.6, 0.7, 0.8, 0.95, 0.999] {
            let direct = psi_closed_form(p);
            assert!((rs.coefficient(0, p) - direct).abs() < 1e-13, "p = {p}");
        }
        assert!((rs.coefficient(0, 0.0) - (PI / 8.0).cos()).abs() < 1e-13);
    }

    #[test]
    fn c0_is_smooth_through_removable_points() {
        let rs = RsCorrection::new();
        for p in [0.25, 0.75] {
            let h = 1e-6;
            let left = psi_closed_form(p - h);
            let right = psi_closed_form(p + h);
            assert!((rs.coefficient(0, p) - 0.5 * (left + right)).abs() < 1e-6);
        }
    }

    #[test]
    fn c1_is_a_scaled_third_derivative() {
        let rs = RsCorrection::new();
        let h = 1e-2;
        for p in [0.1, 0.4, 0.6, 0.9] {
            let f = |x: f64| rs.coefficient(0, x);
            let third = (f(p + 2.0 * h) - 2.0 * f(p + h) + 2.0 * f(p - h) - f(p - 2.0 * h)) / (2.0 * h * h * h);
            let expected = -third / (96.0 * PI * PI);
            assert!((rs.coefficient(1, p) - expected).abs() < 1e-4, "p = {p}");
        }
    }

    #[test]
    fn parities() {
        let rs = RsCorrection::new();
        for z in [0.05, 0.2, 0.37, 0.49] {
            for k in 0..5 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let a = rs.coefficient(k, 0.5 + z);
                let b = rs.coefficient(k, 0.5 - z);
                assert!((a - sign * b).abs() < 1e-12, "k = {k}");
            }
        }
    }
}
