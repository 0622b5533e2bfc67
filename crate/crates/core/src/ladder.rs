//! The nonlinear integral equation
//!
//! ∫₀^{μ[x]} Z²(t) e^{−2t/x} dt = ∫₀^T Z²(t) dt,   μ[x] = 7x ln x,
//!
//! whose solution x = φ(T) is the ladder, together with the cumulative
//! integral ∫₀^T Z² it needs and the two formulas written in terms of φ.
//!
//! The left side is evaluated from a [`MomentTable`]: for each checkpoint
//! panel [tₖ, tₖ + h] the table holds Mₖⱼ = ∫ Z²(t) sʲ dt with
//! s = (t − tₖ)/h, so that
//!
//! ∫_{tₖ}^{tₖ+h} Z² e^{−2t/x} dt = e^{−2tₖ/x} Σⱼ (−2h/x)ʲ/j! · Mₖⱼ.
//!
//! One pass of quadrature then serves every x the solver tries.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hl_core::{check_rel_tol, HlContext, Segment};
use crate::math::{self, EULER_GAMMA, LN_TAU};
use crate::params;
use crate::verifier::{FormulaId, VerificationRecord};

/// Default checkpoint spacing.
pub const STEP: f64 = 10.0;
/// Smallest T handed to [`solve_ladder`].
pub const T_LADDER_MIN: f64 = 200.0;
/// Powers sʲ kept per panel, j = 0..MOMENTS.
pub const MOMENTS: usize = 13;
/// Below this x the weighted integral is computed by direct quadrature;
/// above it the Taylor factor (2h/x)^13/13! is under 10⁻¹⁵.
pub const X_DIRECT: f64 = 50.0;
/// Largest relative error allowed from the mean-value tail used when μ[x]
/// lies beyond the table.
pub const TAIL_TOL: f64 = 1e-12;
/// Bound on |E(t) − π| for t ≤ 10⁶, E the remainder of ∫₀^t Z² after its
/// two main terms. Observed values stay below 40 there.
pub const E_SPREAD: f64 = 100.0;
/// Relative width at which bisection stops.
const SOLVE_XTOL: f64 = 1e-15;

/// ∫₀^{k·step} Z² for k = 0, 1, ….
#[derive(Clone, Debug, PartialEq)]
pub struct CumulativeTable {
    step: f64,
    values: Vec<f64>,
}

impl CumulativeTable {
    /// Wraps checkpoint values, checking the table invariants.
    pub fn new(step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::Domain {
                what: "checkpoint step must be positive",
                value: step,
            });
        }
        if values.first() != Some(&0.0) {
            return Err(Error::Numerical("cumulative table must start at 0".into()));
        }
        if let Some(k) = values.windows(2).position(|w| !(w[1] >= w[0])) {
            return Err(Error::Numerical(alloc::format!(
                "cumulative table decreases at checkpoint {}",
                k + 1
            )));
        }
        Ok(Self { step, values })
    }

    /// Checkpoints up to at least `t_max`.
    pub fn build(ctx: &HlContext, t_max: f64, step: f64, rel_tol: f64) -> Result<Self> {
        Ok(MomentTable::build(ctx, t_max, step, rel_tol)?.cumulative)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Last checkpoint abscissa.
    pub fn coverage(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    /// ∫₀^T Z²: the checkpoint at or below T plus fresh quadrature of the
    /// remainder. T may exceed the coverage by at most one step.
    pub fn cumulative_z2(&self, ctx: &HlContext, t: f64, rel_tol: f64) -> Result<f64> {
        if !(t >= 0.0) || t > self.coverage() + self.step {
            return Err(Error::Range {
                what: "cumulative integral beyond the table",
                value: t,
                covered: (0.0, self.coverage() + self.step),
            });
        }
        let k = ((t / self.step) as usize).min(self.values.len() - 1);
        let t_k = k as f64 * self.step;
        let rest = ctx.integrate_z2_range(t_k, t, rel_tol, |_, _| {})?;
        Ok(self.values[k] + rest)
    }
}

/// Checkpoint moments for the weighted integral, plus the cumulative table.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    cumulative: CumulativeTable,
    moments: Vec<[f64; MOMENTS]>,
}

impl MomentTable {
    pub fn build(ctx: &HlContext, t_max: f64, step: f64, rel_tol: f64) -> Result<Self> {
        Self::build_range(ctx, 0, math::ceil(t_max / step) as usize, step, rel_tol)
            .and_then(|(moments, _)| Self::from_moments(step, moments))
    }

    /// Moments for panels `first..last` alone, so that a caller can build
    /// blocks in parallel and join them with [`MomentTable::from_moments`].
    /// The second value is the number of integrand evaluations.
    pub fn build_range(
        ctx: &HlContext,
        first: usize,
        last: usize,
        step: f64,
        rel_tol: f64,
    ) -> Result<(Vec<[f64; MOMENTS]>, u64)> {
        check_rel_tol(rel_tol)?;
        let mut moments = Vec::with_capacity(last.saturating_sub(first));
        let mut evaluations = 0u64;
        for k in first..last {
            let t_k = k as f64 * step;
            let mut m = [0.0; MOMENTS];
            ctx.integrate_z2_range(t_k, t_k + step, rel_tol, |t, v| {
                evaluations += 1;
                let s = (t - t_k) / step;
                let mut p = v;
                for mj in m.iter_mut() {
                    *mj += p;
                    p *= s;
                }
            })?;
            moments.push(m);
        }
        Ok((moments, evaluations))
    }

    /// Rebuilds the cumulative sums from per-panel moments.
    pub fn from_moments(step: f64, moments: Vec<[f64; MOMENTS]>) -> Result<Self> {
        let mut values = Vec::with_capacity(moments.len() + 1);
        let mut acc = 0.0;
        values.push(acc);
        for m in &moments {
            acc += m[0];
            values.push(acc);
        }
        Ok(Self {
            cumulative: CumulativeTable::new(step, values)?,
            moments,
        })
    }

    pub fn cumulative(&self) -> &CumulativeTable {
        &self.cumulative
    }

    pub fn moments(&self) -> &[[f64; MOMENTS]] {
        &self.moments
    }

    pub fn coverage(&self) -> f64 {
        self.cumulative.coverage()
    }
}

/// μ[x] = 7x ln x.
#[inline]
pub fn mu(x: f64) -> f64 {
    7.0 * x * math::ln(x)
}

/// ∫₀^{μ[x]} Z² e^{−2t/x} dt for x > e.
pub fn weighted_integral(ctx: &HlContext, table: &MomentTable, x: f64, rel_tol: f64) -> Result<f64> {
    let (total, bound) = weighted_with_bound(ctx, table, x, rel_tol)?;
    if bound > TAIL_TOL * total {
        return Err(Error::Range {
            what: "moment table too short for the weighted integral",
            value: x,
            covered: (0.0, table.coverage()),
        });
    }
    Ok(total)
}

/// The weighted integral and a bound on the error of the mean-value tail
/// used beyond the table (zero when the table covers μ[x]).
fn weighted_with_bound(ctx: &HlContext, table: &MomentTable, x: f64, rel_tol: f64) -> Result<(f64, f64)> {
    if !(x > core::f64::consts::E) || !x.is_finite() {
        return Err(Error::Domain {
            what: "weighted integral needs x > e",
            value: x,
        });
    }
    let upper = mu(x);
    let weight = |t: f64| math::exp(-2.0 * t / x);
    if x < X_DIRECT {
        return Ok((
            ctx.integrate_weighted_range(0.0, upper, rel_tol, weight, |_, _| {})?,
            0.0,
        ));
    }

    let step = table.cumulative.step;
    let cover = table.coverage();
    let cut = upper.min(cover);

    let full = ((cut / step) as usize).min(table.moments.len());
    let a = -2.0 * step / x;
    let mut coeffs = [0.0; MOMENTS];
    let mut c = 1.0;
    for (j, cj) in coeffs.iter_mut().enumerate() {
        *cj = c;
        c *= a / (j + 1) as f64;
    }
    let mut total = 0.0;
    for (k, m) in table.moments[..full].iter().enumerate() {
        let inner: f64 = m.iter().zip(&coeffs).rev().map(|(mj, cj)| mj * cj).sum();
        total += weight(k as f64 * step) * inner;
    }
    let t_full = full as f64 * step;
    if cut > t_full {
        total += ctx.integrate_weighted_range(t_full, cut, rel_tol, weight, |_, _| {})?;
    }
    let mut bound = 0.0;
    if upper > cover {
        let (tail, b) = mean_value_tail(table, x, cover, upper);
        total += tail;
        bound = b;
    }
    Ok((total, bound))
}

/// ∫_c^μ Z² e^{−2t/x} dt beyond the table end c.
///
/// Write ∫₀^t Z² = M(t) + E(t) with M(t) = t ln(t/2π) + (2c − 1)t. Then
/// ∫_c^μ Z² w = ∫_c^μ M′w + [wE]_c^μ + (2/x)∫_c^μ E w, and E has mean π.
/// Replacing E by π under the last integral leaves an error below
/// w(c)·sup|E − π|, returned as the bound with sup|E − π| ≤ [`E_SPREAD`].
fn mean_value_tail(table: &MomentTable, x: f64, c: f64, mu: f64) -> (f64, f64) {
    let e_c = table.cumulative.values[table.cumulative.values.len() - 1] - mean_integral(c);
    let w = |t: f64| math::exp(-2.0 * t / x);
    let smooth = |t: f64| (math::ln(t) - LN_TAU + 2.0 * EULER_GAMMA) * w(t);
    let rule = crate::quad::GaussLegendre::new(16);
    let settings = crate::quad::Adaptive::new(0.25 * x, 1e-14);
    let main =
        crate::quad::integrate_adaptive(&rule, &settings, smooth, c, mu, |_, _| {}).unwrap_or_else(|e| match e {
            Error::Quadrature { fine, .. } => fine,
            _ => 0.0,
        });
    let tail = main + w(c) * (math::PI - e_c) - w(mu) * (math::PI - e_c);
    (tail, w(c) * E_SPREAD)
}

/// t ln(t/2π) + (2c − 1)t.
fn mean_integral(t: f64) -> f64 {
    t * (math::ln(t) - LN_TAU) + (2.0 * EULER_GAMMA - 1.0) * t
}

/// A solution of the ladder equation at T.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderSample {
    pub t: f64,
    pub phi: f64,
    /// |weighted − cumulative| / cumulative at φ.
    pub equation_residual: f64,
}

/// Bisection on x ↦ weighted_integral(x) − ∫₀^T Z², starting from the
/// bracket [e + 1, T] and doubling the upper end until the sign changes.
pub fn solve_ladder(ctx: &HlContext, table: &MomentTable, t: f64, rel_tol: f64) -> Result<LadderSample> {
    if !(t >= T_LADDER_MIN) {
        return Err(Error::Domain {
            what: "ladder needs T >= 200",
            value: t,
        });
    }
    let target = table.cumulative.cumulative_z2(ctx, t, rel_tol)?;
    // Only the sign of the difference matters while bracketing, so a value
    // that leans on the mean-value tail is usable when it clears the tail
    // bound; the root itself must satisfy the strict tail tolerance.
    let f = |x: f64| {
        let (w, bound) = weighted_with_bound(ctx, table, x, rel_tol)?;
        if bound > TAIL_TOL * w && (w - target).abs() <= bound {
            return Err(Error::Range {
                what: "moment table too short to decide the sign of the ladder equation",
                value: x,
                covered: (0.0, table.coverage()),
            });
        }
        Ok(w - target)
    };

    let mut lo = core::f64::consts::E + 1.0;
    let mut f_lo = f(lo)?;
    let mut hi = t;
    let mut f_hi = f(hi)?;
    let mut grow = 0;
    while (f_lo < 0.0) == (f_hi < 0.0) {
        if f_lo > 0.0 || grow >= 8 {
            return Err(Error::Solver {
                what: "no sign change for the ladder equation",
                lo: (lo, f_lo),
                hi: (hi, f_hi),
            });
        }
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = f(hi)?;
        grow += 1;
    }
    while hi - lo > SOLVE_XTOL * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            lo = mid;
            f_lo = 0.0;
            hi = mid;
            f_hi = 0.0;
            break;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    let (phi, f_phi) = if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    weighted_integral(ctx, table, phi, rel_tol)?;
    Ok(LadderSample {
        t,
        phi,
        equation_residual: f_phi.abs() / target,
    })
}

/// ½φ ln(½φ) + (c − ln 2π)·½φ.
pub fn almost_exact_main(phi: f64) -> f64 {
    let y = 0.5 * phi;
    y * math::ln(y) + (EULER_GAMMA - LN_TAU) * y
}

/// c₀ such that the almost-exact remainder vanishes at this sample.
pub fn calibrate_c0(integral: f64, sample: &LadderSample) -> f64 {
    integral - almost_exact_main(sample.phi)
}

/// ∫₀^T Z² − [½φ ln ½φ + (c − ln 2π)½φ + c₀] against C·ln T/T.
pub fn almost_exact_check(integral: f64, sample: &LadderSample, c0: f64, c: f64) -> VerificationRecord {
    let t = sample.t;
    let residual = integral - almost_exact_main(sample.phi) - c0;
    VerificationRecord::new(
        FormulaId::AlmostExact,
        alloc::vec![("T", t), ("c0", c0)],
        residual,
        c,
        math::ln(t) / t,
    )
    .with("phi", sample.phi)
    .with("integral", integral)
}

/// Chord slope against τ̂ = S/ln T with envelope κ·ln ln T/ln T, for
/// 0 < U ≤ T/ln T.
pub fn multiplicative_check(
    ctx: &HlContext,
    t: f64,
    u: f64,
    kappa: f64,
    epsilon: f64,
    rel_tol: f64,
) -> Result<VerificationRecord> {
    let limit = t / math::ln(t);
    if !(u > 0.0 && u <= limit) {
        return Err(Error::Precondition {
            what: "U outside (0, T/ln T]",
            value: u,
            limit,
        });
    }
    let m = ctx.measure(&Segment::new(t, u, epsilon)?, rel_tol)?;
    let ratio = m.integral / (u * math::ln(t) * m.chord_slope) - 1.0;
    Ok(VerificationRecord::new(
        FormulaId::Multiplicative,
        alloc::vec![("T", t), ("U", u), ("kappa", kappa)],
        (m.chord_slope - m.tau_hat).abs(),
        kappa,
        params::chord_tolerance(t, 1.0),
    )
    .with("chord_slope", m.chord_slope)
    .with("tau_hat", m.tau_hat)
    .with("ratio_deviation", ratio.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_at_100() {
        assert!((mu(100.0) - 3_223.619_130_191_664).abs() < 1e-9);
        assert!(-2.0 * mu(100.0) / 100.0 < -64.4);
    }

    #[test]
    fn table_invariants() {
        assert!(CumulativeTable::new(10.0, alloc::vec![0.0, 1.0, 1.0, 2.0]).is_ok());
        assert!(CumulativeTable::new(10.0, alloc::vec![0.0, 2.0, 1.0]).is_err());
        assert!(CumulativeTable::new(10.0, alloc::vec![1.0]).is_err());
        assert!(CumulativeTable::new(0.0, alloc::vec![0.0]).is_err());
    }

    #[test]
    fn cumulative_at_zero_and_out_of_range() {
        let ctx = HlContext::new(1000.0).unwrap();
        let table = CumulativeTable::build(&ctx, 100.0, STEP, 1e-8).unwrap();
        assert_eq!(table.cumulative_z2(&ctx, 0.0, 1e-8).unwrap(), 0.0);
        assert!(table.cumulative_z2(&ctx, 110.0, 1e-8).is_ok());
        assert!(matches!(
            table.cumulative_z2(&ctx, 110.5, 1e-8),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn moments_reproduce_direct_weighting() {
        let ctx = HlContext::new(1000.0).unwrap();
        let table = MomentTable::build(&ctx, 3000.0, STEP, 1e-10).unwrap();
        let x = 120.0;
        let cut = table.coverage();
        let direct = ctx
            .integrate_weighted_range(0.0, cut, 1e-10, |t| (-2.0 * t / x).exp(), |_, _| {})
            .unwrap();
        let via = weighted_integral(&ctx, &table, x, 1e-10).unwrap();
        assert!(((via - direct) / direct).abs() < 1e-12, "{via} vs {direct}");
    }
}
