//! Asymptotically approximate solutions [T̃, Ũ] of τ = S(T, U)/ln T.
//!
//! Both scans follow the chord construction: along a grid of left ends T̃
//! they look for lengths Ũ at which the segment mean (1/Ũ)∫Z² equals
//! τ·ln T̃, and then certify each such pair by recomputing τ̂ = S(T̃, Ũ)/ln T̃
//! and comparing it with τ under the tolerance κ·ln ln T̃/ln T̃.
//!
//! * [`scan_parallel`]: τ = 1, T̃ ∈ [T₀, T₀ + U₀), Ũ ≤ T₀^{1/6−ε/2}.
//! * [`scan_rotating`]: τ ∈ [η, 1 − η], γ < T̃ < γ + 1.1·U₀(γ), Ũ < γ^{1/6−ε/2}.
//!
//! Root location is by sign scan and bisection only; both τ̂(T, ·) and the
//! segment mean oscillate too much in U for derivative-based steps.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hl_core::{check_rel_tol, HlContext};
use crate::math;
use crate::params;

/// Grid steps per scan in U.
pub const N_SCAN: usize = 400;
/// T̃ grid points per scan.
pub const GRID: usize = 200;
/// Bracket width at which U-bisection stops.
pub const U_TOL: f64 = 1e-6;
/// Window factor on U₀ in the candidate ranges.
pub const WINDOW: f64 = 1.1;
/// Smallest anchor accepted by the scans.
pub const ANCHOR_MIN: f64 = 1e3;

/// What a candidate was found from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnchorKind {
    /// A fixed T₀; parallel chords, τ = 1.
    T0,
    /// A zero γ of Z; rotating chords.
    Gamma,
}

impl AnchorKind {
    pub fn name(self) -> &'static str {
        match self {
            AnchorKind::T0 => "T0",
            AnchorKind::Gamma => "gamma",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "T0" => Some(AnchorKind::T0),
            "gamma" => Some(AnchorKind::Gamma),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AasCandidate {
    pub t_tilde: f64,
    pub u_tilde: f64,
    pub tau_target: f64,
    pub tau_hat: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub anchor_kind: AnchorKind,
    pub anchor: f64,
    pub certified: bool,
}

impl AasCandidate {
    /// An uncertified pair; [`certify`] fills in the measured fields.
    pub fn new(t_tilde: f64, u_tilde: f64, tau_target: f64, anchor_kind: AnchorKind, anchor: f64) -> Self {
        Self {
            t_tilde,
            u_tilde,
            tau_target,
            tau_hat: f64::NAN,
            residual: f64::NAN,
            tolerance: f64::NAN,
            anchor_kind,
            anchor,
            certified: false,
        }
    }

    /// The range constraints for the candidate's anchor kind, and τ in
    /// [η, 1 − η] ∪ {1}.
    pub fn in_range(&self, epsilon: f64, eta: f64) -> bool {
        if !tau_admissible(self.tau_target, eta) || !(self.u_tilde > 0.0) {
            return false;
        }
        let a = self.anchor;
        let top = a + WINDOW * params::u0(a, epsilon);
        let u_max = params::short_window(a, epsilon);
        match self.anchor_kind {
            AnchorKind::T0 => self.t_tilde >= a && self.t_tilde <= top && self.u_tilde <= u_max,
            AnchorKind::Gamma => self.t_tilde > a && self.t_tilde < top && self.u_tilde < u_max,
        }
    }
}

/// Scan parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AasSettings {
    pub epsilon: f64,
    pub eta: f64,
    pub kappa: f64,
    pub n_scan: usize,
    pub grid: usize,
    pub rel_tol: f64,
}

impl Default for AasSettings {
    fn default() -> Self {
        Self {
            epsilon: params::EPSILON,
            eta: params::ETA,
            kappa: params::KAPPA,
            n_scan: N_SCAN,
            grid: GRID,
            rel_tol: params::REL_TOL_SWEEP,
        }
    }
}

/// Candidates of one scan plus what it took to find them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanReport {
    /// Certified candidates, sorted by (T̃, Ũ).
    pub candidates: Vec<AasCandidate>,
    /// T̃ grid points examined.
    pub grid_points: usize,
    /// Pairs that passed the mean-based pre-filter.
    pub prefiltered: usize,
}

pub fn tau_admissible(tau: f64, eta: f64) -> bool {
    tau == 1.0 || (tau >= eta && tau <= 1.0 - eta)
}

fn check_tau(tau: f64, eta: f64) -> Result<()> {
    if tau_admissible(tau, eta) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "tau must lie in [eta, 1 - eta] or equal 1",
            value: tau,
        })
    }
}

/// τ̂(T, U) = S(T, U)/ln T.
pub fn tau_hat(ctx: &HlContext, t: f64, u: f64) -> Result<f64> {
    Ok(ctx.s_sum(t, u)? / math::ln(t))
}

/// Every Ũ ∈ (0, u_max] with τ̂(T, Ũ) = τ found on a scan of `n_scan`
/// steps, each refined to [`U_TOL`].
pub fn solve_u_for_tau(ctx: &HlContext, t: f64, tau: f64, u_max: f64, settings: &AasSettings) -> Result<Vec<f64>> {
    check_tau(tau, settings.eta)?;
    let window = params::short_window(t, settings.epsilon);
    if !(u_max > 0.0) || u_max > window * (1.0 + 1e-12) {
        return Err(Error::Precondition {
            what: "u_max must lie in (0, T^(1/6 - eps/2)]",
            value: u_max,
            limit: window,
        });
    }
    let n = settings.n_scan.max(1);
    let f = |u: f64| tau_hat(ctx, t, u).map(|v| v - tau);
    let h = u_max / n as f64;
    let mut roots = Vec::new();
    let mut prev = (h, f(h)?);
    if prev.1 == 0.0 {
        roots.push(prev.0);
    }
    for k in 2..=n {
        let u = if k == n { u_max } else { k as f64 * h };
        let cur = (u, f(u)?);
        if cur.1 == 0.0 {
            roots.push(u);
        } else if prev.1 != 0.0 && (prev.1 < 0.0) != (cur.1 < 0.0) {
            roots.push(bisect(prev, cur, &f)?);
        }
        prev = cur;
    }
    Ok(roots)
}

/// Bisection on a sign-change bracket down to [`U_TOL`]; returns the end
/// with the smaller |f|.
fn bisect<F>(mut lo: (f64, f64), mut hi: (f64, f64), f: &F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    while hi.0 - lo.0 > U_TOL {
        let m = 0.5 * (lo.0 + hi.0);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (lo.1 < 0.0) {
            lo = (m, fm);
        } else {
            hi = (m, fm);
        }
    }
    Ok(if lo.1.abs() <= hi.1.abs() { lo.0 } else { hi.0 })
}

/// Lengths Ũ ∈ (0, u_max] at which (1/Ũ)∫_T^{T+Ũ} Z² = `target`, from a
/// scan of `n_scan` steps.
pub fn mean_roots(ctx: &HlContext, t: f64, target: f64, u_max: f64, n_scan: usize, rel_tol: f64) -> Result<Vec<f64>> {
    check_rel_tol(rel_tol)?;
    let n = n_scan.max(1);
    let h = u_max / n as f64;
    let z0 = ctx.z().eval(t);
    // g(u) = ∫_T^{T+u} Z² − target·u has the sign of the mean minus target.
    let mut prev_u = 0.0;
    let mut prev_int = 0.0;
    let mut prev_sign = z0 * z0 - target;
    let mut roots = Vec::new();
    for k in 1..=n {
        let u = if k == n { u_max } else { k as f64 * h };
        let int = prev_int + ctx.integrate_z2_range(t + prev_u, t + u, rel_tol, |_, _| {})?;
        let g = int - target * u;
        if g == 0.0 {
            roots.push(u);
        } else if prev_sign != 0.0 && (prev_sign < 0.0) != (g < 0.0) {
            let (base_u, base_int) = (prev_u, prev_int);
            let f = |v: f64| -> Result<f64> {
                let extra = ctx.integrate_z2_range(t + base_u, t + v, rel_tol, |_, _| {})?;
                Ok(base_int + extra - target * v)
            };
            // At u = 0 only the sign of the mean matters; (0, g′(0)) carries it.
            roots.push(bisect((prev_u, prev_sign), (u, g), &f)?);
        }
        prev_u = u;
        prev_int = int;
        prev_sign = g;
    }
    Ok(roots)
}

/// Recomputes τ̂, the residual and the tolerance κ·ln ln T̃/ln T̃, and sets
/// `certified` when the residual is within tolerance and the ranges hold.
pub fn certify(ctx: &HlContext, candidate: &AasCandidate, settings: &AasSettings) -> Result<AasCandidate> {
    let mut c = *candidate;
    c.tau_hat = tau_hat(ctx, c.t_tilde, c.u_tilde)?;
    c.residual = (c.tau_hat - c.tau_target).abs();
    c.tolerance = params::chord_tolerance(c.t_tilde, settings.kappa);
    c.certified = c.residual <= c.tolerance && c.in_range(settings.epsilon, settings.eta);
    Ok(c)
}

/// Left ends examined by [`scan_parallel`]: T₀ + i·U₀/grid, i < grid.
/// Doubling `grid` keeps every earlier point.
pub fn parallel_grid(t0: f64, settings: &AasSettings) -> Vec<f64> {
    let u0 = params::u0(t0, settings.epsilon);
    let g = settings.grid.max(1);
    (0..g).map(|i| t0 + i as f64 * u0 / g as f64).collect()
}

/// Left ends examined by [`scan_rotating`]: γ + i·1.1U₀(γ)/grid, 0 < i < grid.
pub fn rotating_grid(gamma: f64, settings: &AasSettings) -> Vec<f64> {
    let w = WINDOW * params::u0(gamma, settings.epsilon);
    let g = settings.grid.max(2);
    (1..g).map(|i| gamma + i as f64 * w / g as f64).collect()
}

/// Pre-filtered and certified candidates with left end `t_tilde`. Returns
/// the certified ones and the number that passed the pre-filter.
pub fn candidates_at(
    ctx: &HlContext,
    t_tilde: f64,
    tau: f64,
    kind: AnchorKind,
    anchor: f64,
    settings: &AasSettings,
) -> Result<(Vec<AasCandidate>, usize)> {
    let u_max = params::short_window(anchor, settings.epsilon);
    let target = tau * math::ln(t_tilde);
    let roots = mean_roots(ctx, t_tilde, target, u_max, settings.n_scan, settings.rel_tol)?;
    let mut out = Vec::new();
    for &u in &roots {
        let c = certify(ctx, &AasCandidate::new(t_tilde, u, tau, kind, anchor), settings)?;
        if c.certified {
            out.push(c);
        }
    }
    Ok((out, roots.len()))
}

fn check_anchor(anchor: f64) -> Result<()> {
    if anchor >= ANCHOR_MIN && anchor.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "scan anchor must be at least 1e3",
            value: anchor,
        })
    }
}

fn collect(
    ctx: &HlContext,
    grid: &[f64],
    tau: f64,
    kind: AnchorKind,
    anchor: f64,
    settings: &AasSettings,
) -> Result<ScanReport> {
    let mut report = ScanReport {
        grid_points: grid.len(),
        ..ScanReport::default()
    };
    for &t in grid {
        let (found, roots) = candidates_at(ctx, t, tau, kind, anchor, settings)?;
        report.candidates.extend(found);
        report.prefiltered += roots;
    }
    sort_candidates(&mut report.candidates);
    Ok(report)
}

/// Orders by (T̃, Ũ).
pub fn sort_candidates(candidates: &mut [AasCandidate]) {
    candidates.sort_by(|a, b| a.t_tilde.total_cmp(&b.t_tilde).then(a.u_tilde.total_cmp(&b.u_tilde)));
}

/// Parallel chords at T₀: τ = 1.
pub fn scan_parallel(ctx: &HlContext, t0: f64, settings: &AasSettings) -> Result<ScanReport> {
    check_anchor(t0)?;
    collect(ctx, &parallel_grid(t0, settings), 1.0, AnchorKind::T0, t0, settings)
}

/// Rotating chords at a zero γ for one direction τ ∈ [η, 1 − η].
pub fn scan_rotating(ctx: &HlContext, gamma: f64, tau: f64, settings: &AasSettings) -> Result<ScanReport> {
    check_anchor(gamma)?;
    if !(tau >= settings.eta && tau <= 1.0 - settings.eta) {
        return Err(Error::Domain {
            what: "rotating chords need tau in [eta, 1 - eta]",
            value: tau,
        });
    }
    collect(
        ctx,
        &rotating_grid(gamma, settings),
        tau,
        AnchorKind::Gamma,
        gamma,
        settings,
    )
}

/// Counts of candidates per T̃ bin and the spread of their left ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
    pub count: usize,
    /// Smallest and largest gap between consecutive distinct T̃; `None`
    /// with fewer than two distinct values.
    pub min_gap: Option<f64>,
    pub max_gap: Option<f64>,
}

impl Histogram {
    /// Empty bins strictly between the first and last non-empty bin.
    pub fn interior_gaps(&self) -> usize {
        let first = self.counts.iter().position(|&c| c > 0);
        let last = self.counts.iter().rposition(|&c| c > 0);
        match (first, last) {
            (Some(a), Some(b)) => self.counts[a..=b].iter().filter(|&&c| c == 0).count(),
            _ => 0,
        }
    }
}

/// Bins the candidates' T̃ over [min T̃, max T̃].
pub fn density_report(candidates: &[AasCandidate], bins: usize) -> Result<Histogram> {
    if candidates.is_empty() {
        return Err(Error::Domain {
            what: "density report needs at least one candidate",
            value: 0.0,
        });
    }
    if bins == 0 {
        return Err(Error::Domain {
            what: "density report needs at least one bin",
            value: 0.0,
        });
    }
    let mut ts: Vec<f64> = candidates.iter().map(|c| c.t_tilde).collect();
    ts.sort_by(f64::total_cmp);
    let lo = ts[0];
    let hi = ts[ts.len() - 1];
    let width = (hi - lo) / bins as f64;
    let mut counts = alloc::vec![0; bins];
    for &t in &ts {
        let i = if width > 0.0 { ((t - lo) / width) as usize } else { 0 };
        counts[i.min(bins - 1)] += 1;
    }
    ts.dedup();
    let gaps = ts.windows(2).map(|w| w[1] - w[0]);
    let min_gap = gaps.clone().reduce(f64::min);
    let max_gap = gaps.reduce(f64::max);
    Ok(Histogram {
        lo,
        hi,
        counts,
        count: candidates.len(),
        min_gap,
        max_gap,
    })
}
