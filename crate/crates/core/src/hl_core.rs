//! The segment sum S(T, U), the Hardy–Littlewood main sum for Z², and
//! quadrature of Z² over segments.

use crate::dd::{DoubleDouble, Split};
use crate::error::{Error, Result};
use crate::math::{self, TAU};
use crate::params;
use crate::quad::{integrate_adaptive_batch, Adaptive, GaussLegendre};
use crate::special_fn::{dtheta, theta_dd, DivisorTable, LnTable, ZFunction, DEFAULT_BUDGET, T_SWITCH};

/// Smallest T accepted by the sums and by [`Segment`].
pub const T_MIN: f64 = 100.0;

/// Nodes per coarse panel; panels span two periods of Z², so the coarse
/// rule has eight nodes per period.
const PANEL_NODES: usize = 16;

/// Panels whose mean integrand is below this are tested absolutely. The
/// mean of Z² is ln(t/2π) + 2c, above 1 wherever Z oscillates.
const Z2_FLOOR: f64 = 1.0;

/// Longest stretch integrated with a single panel width.
const CHUNK: f64 = 512.0;

/// A part [T, T + U] of the Hardy–Littlewood integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub t: f64,
    pub u: f64,
    /// U ≤ T^{1/6 − ε/2}.
    pub short: bool,
}

impl Segment {
    pub fn new(t: f64, u: f64, epsilon: f64) -> Result<Self> {
        if !(t >= T_MIN) || !t.is_finite() {
            return Err(Error::Domain {
                what: "segment needs T >= 100",
                value: t,
            });
        }
        if !(u > 0.0) || !u.is_finite() {
            return Err(Error::Domain {
                what: "segment needs U > 0",
                value: u,
            });
        }
        Ok(Self {
            t,
            u,
            short: u <= params::short_window(t, epsilon),
        })
    }

    pub fn end(&self) -> f64 {
        self.t + self.u
    }
}

/// Everything measured on one segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentMeasurement {
    pub segment: Segment,
    /// ∫ Z² over the segment.
    pub integral: f64,
    /// integral / U.
    pub mean: f64,
    pub s_value: f64,
    /// S(T, U)/ln T.
    pub tau_hat: f64,
    /// mean/ln T.
    pub chord_slope: f64,
}

/// Shared tables: Z evaluator, d(n), ln n, and the quadrature rule.
#[derive(Clone, Debug)]
pub struct HlContext {
    z: ZFunction,
    divisors: DivisorTable,
    ln: LnTable,
    rule: GaussLegendre,
}

impl HlContext {
    /// Tables large enough for sums at every T ≤ `t_max`.
    pub fn new(t_max: f64) -> Result<Self> {
        Self::with_budget(t_max, DEFAULT_BUDGET)
    }

    pub fn with_budget(t_max: f64, budget: u64) -> Result<Self> {
        let limit = math::ceil(t_max.max(T_MIN) / TAU) as u64 + 1;
        let divisors = DivisorTable::new(limit, budget)?;
        Ok(Self::from_divisors(divisors))
    }

    /// Wraps an existing (for instance cached) divisor table.
    pub fn from_divisors(divisors: DivisorTable) -> Self {
        let ln = LnTable::new(divisors.limit() as usize);
        Self {
            z: ZFunction::new(),
            divisors,
            ln,
            rule: GaussLegendre::new(PANEL_NODES),
        }
    }

    pub fn z(&self) -> &ZFunction {
        &self.z
    }

    pub fn divisors(&self) -> &DivisorTable {
        &self.divisors
    }

    /// Largest T for which the sums are covered by the divisor table.
    pub fn t_max(&self) -> f64 {
        self.divisors.limit() as f64 * TAU
    }

    fn check_cover(&self, last: usize) -> Result<()> {
        if last as u64 > self.divisors.limit() {
            return Err(Error::Resource {
                what: "divisor table too small for the sum",
                requested: last as u64,
                budget: self.divisors.limit(),
            });
        }
        Ok(())
    }

    /// S(T, U) = 2 Σ_{n<P} d(n)/√n · sinc(½U ln(P/n)) · cos{(2πP + ½U) ln(P/n) − 2πP − π/4},
    /// P = T/2π.
    pub fn s_sum(&self, t: f64, u: f64) -> Result<f64> {
        if !(t >= T_MIN) || !t.is_finite() {
            return Err(Error::Domain {
                what: "S(T, U) needs T >= 100",
                value: t,
            });
        }
        if !(u >= 0.0) || !u.is_finite() {
            return Err(Error::Domain {
                what: "S(T, U) needs U >= 0",
                value: u,
            });
        }
        let p = t / TAU;
        let last = strict_floor(p);
        if last == 0 {
            return Ok(0.0);
        }
        self.check_cover(last)?;

        let ln_p = DoubleDouble::from_f64(t).ln() - DoubleDouble::LN_TAU;
        // A = 2πP + ½U = T + ½U, exact as a double-double.
        let a = DoubleDouble::sum(t, 0.5 * u);
        let base = (ln_p * a).add_f64(-t) - DoubleDouble::FRAC_PI_4;
        let a_split = Split::new(a.hi);
        let half_u = 0.5 * u;

        let mut acc = 0.0;
        for n in 1..=last {
            let ln_n = self.ln.ln(n);
            let ell = (ln_p - ln_n).to_f64();
            let phase = self.ln.phase(base, a_split, n) - a.lo * ln_n.hi;
            let weight = self.divisors.get(n) as f64 * self.ln.inv_sqrt(n);
            acc += weight * math::sinc(half_u * ell) * math::cos(phase);
        }
        Ok(2.0 * acc)
    }

    /// 2 Σ_{n ≤ t/2π} d(n)/√n · cos{2ϑ(t) − t ln n}.
    pub fn hl_main_sum(&self, t: f64) -> Result<f64> {
        if !(t >= T_MIN) || !t.is_finite() {
            return Err(Error::Domain {
                what: "main sum needs t >= 100",
                value: t,
            });
        }
        let last = math::floor(t / TAU) as usize;
        self.check_cover(last)?;
        let base = theta_dd(t).scale(2.0);
        let t_split = Split::new(t);
        let mut acc = 0.0;
        for n in 1..=last {
            let weight = self.divisors.get(n) as f64 * self.ln.inv_sqrt(n);
            acc += weight * math::cos(self.ln.phase(base, t_split, n));
        }
        Ok(2.0 * acc)
    }

    /// ∫ Z² over the segment.
    pub fn integrate_z2(&self, segment: &Segment, rel_tol: f64) -> Result<f64> {
        check_rel_tol(rel_tol)?;
        self.integrate_z2_range(segment.t, segment.end(), rel_tol, |_, _| {})
    }

    /// ∫ₐᵇ Z² for any 0 ≤ a ≤ b, with the node visitor of
    /// [`integrate_adaptive`].
    pub fn integrate_z2_range<V: FnMut(f64, f64)>(&self, a: f64, b: f64, rel_tol: f64, mut visit: V) -> Result<f64> {
        self.integrate_weighted_range(a, b, rel_tol, |_| 1.0, &mut visit)
    }

    /// ∫ₐᵇ Z²·w with a smooth, slowly varying weight w.
    pub fn integrate_weighted_range<W, V>(&self, a: f64, b: f64, rel_tol: f64, weight: W, visit: V) -> Result<f64>
    where
        W: Fn(f64) -> f64,
        V: FnMut(f64, f64),
    {
        self.integrate_with_floor(a, b, rel_tol, Z2_FLOOR, weight, visit)
    }

    /// As [`HlContext::integrate_weighted_range`], with panels whose
    /// integral is below `floor`·w·width tested absolutely, w being the
    /// smaller weight at the ends of each stretch.
    pub fn integrate_with_floor<W, V>(
        &self,
        a: f64,
        b: f64,
        rel_tol: f64,
        floor: f64,
        weight: W,
        mut visit: V,
    ) -> Result<f64>
    where
        W: Fn(f64) -> f64,
        V: FnMut(f64, f64),
    {
        if !(a >= 0.0) || !(b >= a) {
            return Err(Error::Domain {
                what: "integration range needs 0 <= a <= b",
                value: a,
            });
        }
        let mut total = 0.0;
        let mut lo = a;
        while lo < b {
            // Panels never straddle the switch between the two Z evaluators.
            let stop = if lo < T_SWITCH { b.min(T_SWITCH) } else { b };
            let hi = if stop - lo > 1.5 * CHUNK { lo + CHUNK } else { stop };
            let mut settings = Adaptive::new(panel_width(hi), rel_tol);
            settings.floor = floor * weight(lo).min(weight(hi));
            let z = &self.z;
            total += integrate_adaptive_batch(
                &self.rule,
                &settings,
                |ts, out| {
                    if ts[0] > 0.0 {
                        z.eval_many(ts, out);
                    } else {
                        // Z(0) is the limit value; the evaluator needs t > 0.
                        for (t, o) in ts.iter().zip(out.iter_mut()) {
                            *o = z.eval(t.max(1e-12));
                        }
                    }
                    for (t, o) in ts.iter().zip(out.iter_mut()) {
                        *o = *o * *o * weight(*t);
                    }
                },
                lo,
                hi,
                &mut visit,
            )?;
            lo = hi;
        }
        Ok(total)
    }

    /// Integral, mean, S, τ̂ and chord slope of one segment.
    pub fn measure(&self, segment: &Segment, rel_tol: f64) -> Result<SegmentMeasurement> {
        let integral = self.integrate_z2(segment, rel_tol)?;
        let s_value = self.s_sum(segment.t, segment.u)?;
        let ln_t = math::ln(segment.t);
        let mean = integral / segment.u;
        Ok(SegmentMeasurement {
            segment: *segment,
            integral,
            mean,
            s_value,
            tau_hat: s_value / ln_t,
            chord_slope: mean / ln_t,
        })
    }
}

/// Two periods of Z² at the top of the range, π/ϑ′ each.
pub fn panel_width(t_top: f64) -> f64 {
    let freq = dtheta(t_top.max(1.0)).max(0.5);
    2.0 * math::PI / freq
}

/// Largest integer n with n < p.
#[inline]
pub(crate) fn strict_floor(p: f64) -> usize {
    if p <= 1.0 {
        return 0;
    }
    let c = math::ceil(p) as usize;
    c - 1
}

pub(crate) fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if !(1e-10..=1e-2).contains(&rel_tol) {
        return Err(Error::Domain {
            what: "rel_tol must lie in [1e-10, 1e-2]",
            value: rel_tol,
        });
    }
    Ok(())
}
