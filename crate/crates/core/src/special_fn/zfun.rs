//! Hardy's Z-function, Z(t) = e^{iϑ(t)} ζ(½ + it).
//!
//! Above [`T_SWITCH`] the Riemann–Siegel main sum is used with the
//! remainder corrections C₀…C₄. Below it, ζ(½ + it) comes from the
//! alternating Dirichlet series for η(s) accelerated with Borwein's
//! weights, and Z is the real part of e^{iϑ}ζ.

use alloc::vec::Vec;

use super::rs_coeffs::RsCorrection;
use super::theta::{theta_dd, ThetaMode};
use crate::complex::Complex;
use crate::dd::{reduced_phase, DoubleDouble, Split};
use crate::error::{Error, Result};
use crate::math::{self, TAU};

/// Crossover between the alternating-series path and Riemann–Siegel.
pub const T_SWITCH: f64 = 30.0;

/// Terms in the accelerated alternating series. With t < 30 the truncation
/// bound 3(1 + 2t)e^{πt/2}/(3 + √8)ⁿ is below 10⁻²⁵.
const BORWEIN_TERMS: usize = 64;

/// Main-sum terms tabulated up front; t up to 2π·4096² ≈ 10⁸.
const RS_TABLE_TERMS: usize = 4096;

/// Widest spread of abscissae handled by one shared reference point.
const MANY_SPAN: f64 = 8.0;
/// Abscissae per inner block of [`ZFunction::eval_many`].
const MANY_MAX: usize = 64;

/// ln n in double-double and n^{-1/2}, for n = 0..len (index 0 unused).
#[derive(Clone, Debug)]
pub struct LnTable {
    ln: Vec<DoubleDouble>,
    ln_hi_split: Vec<Split>,
    inv_sqrt: Vec<f64>,
}

impl LnTable {
    pub fn new(max_n: usize) -> Self {
        let mut ln = Vec::with_capacity(max_n + 1);
        let mut inv_sqrt = Vec::with_capacity(max_n + 1);
        ln.push(DoubleDouble::ZERO);
        inv_sqrt.push(0.0);
        for n in 1..=max_n {
            ln.push(DoubleDouble::from_f64(n as f64).ln());
            inv_sqrt.push(1.0 / math::sqrt(n as f64));
        }
        let ln_hi_split = ln.iter().map(|l| Split::new(l.hi)).collect();
        Self {
            ln,
            ln_hi_split,
            inv_sqrt,
        }
    }

    #[inline]
    pub fn max_n(&self) -> usize {
        self.ln.len() - 1
    }

    #[inline]
    pub fn ln(&self, n: usize) -> DoubleDouble {
        self.ln[n]
    }

    /// (base − t·ln n) mod 2π, with `t` pre-split.
    #[inline]
    pub fn phase(&self, base: DoubleDouble, t: Split, n: usize) -> f64 {
        reduced_phase(base, t, self.ln_hi_split[n], self.ln[n].lo)
    }

    #[inline]
    pub fn inv_sqrt(&self, n: usize) -> f64 {
        self.inv_sqrt[n]
    }
}

/// Borwein's dₖ/dₙ weights, stored as 1 − dₖ/dₙ.
#[derive(Clone, Debug)]
struct BorweinWeights {
    weights: Vec<f64>,
}

impl BorweinWeights {
    fn new(n: usize) -> Self {
        // dₖ = n Σ_{i≤k} (n+i−1)! 4ⁱ / ((n−i)! (2i)!)
        let nf = n as f64;
        let mut term = 1.0 / nf;
        let mut partial = Vec::with_capacity(n + 1);
        let mut acc = term;
        partial.push(nf * acc);
        for i in 1..=n {
            let fi = i as f64;
            term *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
            acc += term;
            partial.push(nf * acc);
        }
        let dn = partial[n];
        let weights = partial[..n].iter().map(|dk| (dn - dk) / dn).collect();
        Self { weights }
    }
}

/// Evaluator for Z(t); owns the tables it needs.
#[derive(Clone, Debug)]
pub struct ZFunction {
    ln: LnTable,
    rs: RsCorrection,
    borwein: BorweinWeights,
}

impl Default for ZFunction {
    fn default() -> Self {
        Self::new()
    }
}

impl ZFunction {
    pub fn new() -> Self {
        Self {
            ln: LnTable::new(RS_TABLE_TERMS),
            rs: RsCorrection::new(),
            borwein: BorweinWeights::new(BORWEIN_TERMS),
        }
    }

    /// Z(t) for t > 0.
    pub fn z(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain {
                what: "Z(t) needs t > 0",
                value: t,
            });
        }
        Ok(self.eval(t))
    }

    /// Unchecked Z(t); `t` must be positive and finite.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if t < T_SWITCH {
            self.z_alternating(t)
        } else {
            self.riemann_siegel(t)
        }
    }

    /// Z(t)², the integrand of everything downstream.
    #[inline]
    pub fn z_squared(&self, t: f64) -> f64 {
        let z = self.eval(t);
        z * z
    }

    /// Z at abscissae that lie close together, as in one quadrature panel.
    ///
    /// With a reference point t_c the phase of the n-th term is split as
    /// [ϑ(t_c) − t_c ln n] + [ϑ(t) − ϑ(t_c)] − (t − t_c) ln n. The first
    /// bracket needs double-double work but is shared by all abscissae; the
    /// rest is small and exact enough in plain doubles.
    pub fn eval_many(&self, ts: &[f64], out: &mut [f64]) {
        assert_eq!(ts.len(), out.len(), "eval_many needs matching slices");
        let (lo, hi) = ts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
        let n_top = math::floor(math::sqrt(hi / TAU)) as usize;
        if ts.len() < 4 || lo < T_SWITCH || hi - lo > MANY_SPAN || n_top > self.ln.max_n() {
            for (t, o) in ts.iter().zip(out.iter_mut()) {
                *o = self.eval(*t);
            }
            return;
        }

        let theta_c = theta_dd(lo);
        let split_c = Split::new(lo);
        let mut shift = [0.0; MANY_MAX];
        let mut delta = [0.0; MANY_MAX];
        let mut terms = [0usize; MANY_MAX];
        let mut acc = [0.0; MANY_MAX];
        for chunk_start in (0..ts.len()).step_by(MANY_MAX) {
            let chunk = &ts[chunk_start..(chunk_start + MANY_MAX).min(ts.len())];
            let m = chunk.len();
            let mut n_max = 0;
            for (i, &t) in chunk.iter().enumerate() {
                shift[i] = (theta_dd(t) - theta_c).to_f64();
                delta[i] = t - lo;
                terms[i] = math::floor(math::sqrt(t / TAU)) as usize;
                n_max = n_max.max(terms[i]);
                acc[i] = 0.0;
            }
            for n in 1..=n_max {
                let base = self.ln.phase(theta_c, split_c, n);
                let ln_n = self.ln.ln(n).hi;
                let w = self.ln.inv_sqrt(n);
                for i in 0..m {
                    if n <= terms[i] {
                        acc[i] += w * math::cos(base + shift[i] - delta[i] * ln_n);
                    }
                }
            }
            for (i, &t) in chunk.iter().enumerate() {
                let a = math::sqrt(t / TAU);
                let p = a - terms[i] as f64;
                let sign = if terms[i] % 2 == 1 { 1.0 } else { -1.0 };
                let inv_a = 1.0 / a;
                out[chunk_start + i] = 2.0 * acc[i] + sign * math::sqrt(inv_a) * self.rs.remainder_sum(p, inv_a);
            }
        }
    }

    /// Riemann–Siegel with C₀…C₄.
    pub fn riemann_siegel(&self, t: f64) -> f64 {
        let a = math::sqrt(t / TAU);
        let n_terms = math::floor(a) as usize;
        let p = a - n_terms as f64;
        let theta = theta_dd(t);

        let mut main = 0.0;
        if n_terms <= self.ln.max_n() {
            let t_split = Split::new(t);
            for n in 1..=n_terms {
                main += self.ln.inv_sqrt(n) * math::cos(self.ln.phase(theta, t_split, n));
            }
        } else {
            for n in 1..=n_terms {
                let ln_n = DoubleDouble::from_f64(n as f64).ln();
                let phase = (theta - ln_n.mul_f64(t)).rem_tau();
                main += math::cos(phase) / math::sqrt(n as f64);
            }
        }

        let sign = if n_terms % 2 == 1 { 1.0 } else { -1.0 };
        let inv_a = 1.0 / a;
        2.0 * main + sign * math::sqrt(inv_a) * self.rs.remainder_sum(p, inv_a)
    }

    /// ζ(½ + it) by the accelerated alternating series.
    pub fn zeta_critical(&self, t: f64) -> Complex {
        let mut acc = Complex::default();
        for (k, w) in self.borwein.weights.iter().enumerate() {
            let m = (k + 1) as f64;
            let term = Complex::cis(-t * math::ln(m)).scale(w / math::sqrt(m));
            if k % 2 == 0 {
                acc = acc + term;
            } else {
                acc = acc - term;
            }
        }
        // η(s) = (1 − 2^{1−s}) ζ(s)
        let factor =
            Complex::new(1.0, 0.0) - Complex::cis(-t * core::f64::consts::LN_2).scale(core::f64::consts::SQRT_2);
        acc / factor
    }

    pub fn z_alternating(&self, t: f64) -> f64 {
        let zeta = self.zeta_critical(t);
        let theta = theta_dd(t).to_f64();
        (Complex::cis(theta) * zeta).re
    }

    /// ϑ(t) through the crate's exact path; convenience for callers that
    /// hold an evaluator.
    pub fn theta(&self, t: f64) -> Result<f64> {
        super::theta::theta(t, ThetaMode::Exact).map(|e| e.theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_at_zero_limit_is_zeta_half() {
        let z = ZFunction::new();
        assert!((z.eval(1e-9) + 1.460_354_508_809_586_8).abs() < 1e-8);
    }

    #[test]
    fn rejects_non_positive() {
        let z = ZFunction::new();
        assert!(matches!(z.z(0.0), Err(Error::Domain { .. })));
        assert!(matches!(z.z(-3.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn batch_matches_single_evaluation() {
        let z = ZFunction::new();
        for start in [30.0, 1234.5, 99_999.3, 7.5e5] {
            let ts: Vec<f64> = (0..70).map(|i| start + 0.017 * i as f64 * i as f64 / 10.0).collect();
            let mut out = alloc::vec![0.0; ts.len()];
            z.eval_many(&ts, &mut out);
            for (t, v) in ts.iter().zip(&out) {
                assert!((v - z.eval(*t)).abs() < 1e-11, "t = {t}");
            }
        }
    }

    #[test]
    fn both_paths_agree_near_the_switch() {
        let z = ZFunction::new();
        for t in [30.0, 33.3, 40.0, 55.0] {
            let a = z.riemann_siegel(t);
            let b = z.z_alternating(t);
            assert!((a - b).abs() < 1e-6, "t = {t}: {a} vs {b}");
        }
    }
}
