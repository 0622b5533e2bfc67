//! One function per subcommand. Each returns the table it would emit, so
//! that the same code serves the binary and the test suites.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;
use zeta_chords_core::aas::{self, AasCandidate, AasSettings, AnchorKind, Histogram, ScanReport};
use zeta_chords_core::hl_core::{HlContext, Segment};
use zeta_chords_core::ladder::{self, LadderSample, MomentTable, STEP};
use zeta_chords_core::special_fn::{theta, ThetaMode, ZFunction};
use zeta_chords_core::verifier::{self, Envelopes, VerificationRecord, IVIC_EPS0};
use zeta_chords_core::{params, Error};

use crate::cache::Cache;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::format::{self, num};
use crate::records::{normalized, Output};

/// Largest accepted relative residual of a ladder solution.
pub const LADDER_TOL: f64 = 1e-6;
/// A ladder solution at T uses a moment table covering [0, 24T].
pub const LADDER_COVER: f64 = 24.0;
/// Rotating-chord directions used when none are given.
pub const DEFAULT_TAUS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
/// Length of the interval searched for the rotating-chord anchor.
pub const ANCHOR_SEARCH: f64 = 5.0;

/// Resolved configuration shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Env {
    pub cfg: RunConfig,
    pub cache: Cache,
}

impl Env {
    pub fn new(cfg: RunConfig, cache: Cache) -> Self {
        Self { cfg, cache }
    }

    pub fn envelopes(&self) -> Envelopes {
        self.cfg.envelopes()
    }

    pub fn aas_settings(&self, grid: usize, n_scan: usize) -> AasSettings {
        AasSettings {
            epsilon: self.cfg.epsilon,
            eta: self.cfg.eta,
            kappa: self.cfg.kappa,
            n_scan,
            grid,
            rel_tol: self.cfg.rel_tol_sweep,
        }
    }

    fn context(&self, t_max: f64) -> CliResult<HlContext> {
        self.cache.context(t_max)
    }
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(0.0, f64::max)
}

fn par_map<T, R, F>(items: &[T], f: F) -> CliResult<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, Error> + Sync + Send,
{
    Ok(items.par_iter().map(f).collect::<Result<Vec<_>, _>>()?)
}

fn grid2(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

pub fn record_output(records: &[VerificationRecord]) -> Output {
    let mut out = Output::records();
    for r in records {
        out.push_record(r);
    }
    out
}

/// Rounds to the 12 significant digits that will be printed, so that an
/// input read back from an artifact reproduces the record.
pub fn printed(x: f64) -> f64 {
    num(x).parse().unwrap_or(x)
}

pub fn theta_cmd(ts: &[f64]) -> CliResult<Output> {
    let mut out = Output::new(vec!["t", "theta", "dtheta", "theta_asymptotic", "difference", "bound"]);
    for &t in ts {
        let exact = theta(t, ThetaMode::Exact)?;
        let asym = theta(t, ThetaMode::Asymptotic)?;
        let diff = exact.theta - asym.theta;
        let bound = 1.0 / (6.0 * t);
        out.push_numbers(&[t, exact.theta, exact.dtheta, asym.theta, diff, bound]);
        if diff.abs() > bound {
            out.failed += 1;
        }
    }
    Ok(out)
}

pub fn zfun_cmd(ts: &[f64]) -> CliResult<Output> {
    let z = ZFunction::new();
    let mut out = Output::new(vec!["t", "z"]);
    for &t in ts {
        out.push_numbers(&[t, z.z(t)?]);
    }
    Ok(out)
}

pub fn ssum_cmd(env: &Env, ts: &[f64], us: &[f64]) -> CliResult<Output> {
    let ctx = env.context(max_of(ts))?;
    let mut out = Output::new(vec!["T", "U", "s_value", "tau_hat"]);
    for (t, u) in grid2(ts, us) {
        let s = ctx.s_sum(t, u)?;
        out.push_numbers(&[t, u, s, s / t.ln()]);
    }
    Ok(out)
}

pub fn integrate_cmd(env: &Env, ts: &[f64], us: &[f64]) -> CliResult<Output> {
    let ctx = env.context(max_of(ts))?;
    let pairs = grid2(ts, us);
    let (eps, tol) = (env.cfg.epsilon, env.cfg.rel_tol_verify);
    let ms = par_map(&pairs, |&(t, u)| ctx.measure(&Segment::new(t, u, eps)?, tol))?;
    let mut out = Output::new(vec!["T", "U", "integral", "mean", "s_value", "tau_hat", "chord_slope"]);
    for m in ms {
        out.push_numbers(&[
            m.segment.t,
            m.segment.u,
            m.integral,
            m.mean,
            m.s_value,
            m.tau_hat,
            m.chord_slope,
        ]);
    }
    Ok(out)
}

/// Zeros on (lo, hi), written with 12 decimals. An incomplete table counts
/// as a failure.
pub fn zeros_cmd(env: &Env, lo: f64, hi: f64) -> CliResult<Output> {
    let table = env.cache.zeros(&ZFunction::new(), lo, hi)?;
    let mut out = Output::new(vec!["gamma"]);
    for &g in &table.zeros {
        let text = format::gamma(g);
        out.json
            .push(serde_json::json!({ "gamma": Value::Number(text.parse().expect("decimal")) }));
        out.rows.push(vec![text]);
    }
    eprintln!(
        "zeros on ({}, {}): {} found, theta count {}, complete {}",
        num(lo),
        num(hi),
        table.zeros.len(),
        table.theta_count(),
        table.complete
    );
    if !table.complete {
        out.failed += 1;
    }
    Ok(out)
}

pub fn lemma1(env: &Env, ts: &[f64], us: &[f64], ns: &[u64]) -> CliResult<Vec<VerificationRecord>> {
    let c = env.envelopes().c_lemma1;
    let cases: Vec<(f64, f64, u64)> = grid2(ts, us)
        .into_iter()
        .flat_map(|(t, u)| ns.iter().map(move |&n| (t, u, n)))
        .collect();
    par_map(&cases, |&(t, u, n)| verifier::lemma1_check(t, u, n, c))
}

/// `count` values log-uniform on [lo, hi] from a seeded stream, rounded to
/// their printed digits.
pub fn log_uniform_sample(seed: u64, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|_| printed((a + rng.gen::<f64>() * (b - a)).exp()))
        .collect()
}

/// Lemma 2 at each T with U = `u`, or the short-segment window when absent.
pub fn lemma2(env: &Env, ts: &[f64], u: Option<f64>) -> CliResult<Vec<VerificationRecord>> {
    let ctx = env.context(max_of(ts))?;
    let (eps, tol, c) = (env.cfg.epsilon, env.cfg.rel_tol_verify, env.envelopes().c_lemma2);
    par_map(ts, |&t| {
        let u = u.unwrap_or_else(|| params::short_window(t, eps));
        verifier::lemma2_check(&ctx, t, u, eps, c, tol)
    })
}

pub fn hl_main(env: &Env, ts: &[f64]) -> CliResult<Vec<VerificationRecord>> {
    let ctx = env.context(max_of(ts))?;
    let c = env.envelopes().c_hl_main;
    par_map(ts, |&t| verifier::hl_main_check(&ctx, t, c))
}

pub fn bala(env: &Env, ts: &[f64]) -> CliResult<Vec<VerificationRecord>> {
    let t_max = max_of(ts);
    let ctx = env.context(t_max)?;
    let table = env.cache.moments(&ctx, t_max)?;
    let (eps, tol, c) = (env.cfg.epsilon, env.cfg.rel_tol_verify, env.envelopes().c_bala);
    par_map(ts, |&t| {
        verifier::balasubramanian_check(&ctx, table.cumulative(), t, eps, c, tol)
    })
}

pub fn short_interval(env: &Env, ts: &[f64]) -> CliResult<Vec<VerificationRecord>> {
    let ctx = env.context(max_of(ts))?;
    let (eps, tol, c) = (env.cfg.epsilon, env.cfg.rel_tol_verify, env.envelopes().c_short);
    par_map(ts, |&t| verifier::short_interval_check(&ctx, t, eps, c, tol))
}

/// Smallest integer G in the window T^{1/3 − ε₀} ≤ G.
pub fn ivic_default_g(t: f64) -> f64 {
    t.powf(1.0 / 3.0 - IVIC_EPS0).ceil()
}

pub fn ivic(env: &Env, ts: &[f64], g: Option<f64>) -> CliResult<Vec<VerificationRecord>> {
    let ctx = env.context(max_of(ts))?;
    let (tol, c) = (env.cfg.rel_tol_verify, env.envelopes().c_ivic);
    par_map(ts, |&t| {
        verifier::ivic_ratio(&ctx, t, g.unwrap_or_else(|| ivic_default_g(t)), c, tol)
    })
}

/// A value record for every δ and a stabilization record for every
/// consecutive pair.
pub fn tka(env: &Env, deltas: &[f64]) -> CliResult<Vec<VerificationRecord>> {
    let ctx = env.context(1e3)?;
    let (tol, env_c) = (env.cfg.rel_tol_verify, env.envelopes());
    let mut records = par_map(deltas, |&d| verifier::tka_check(&ctx, d, env_c.c_tka_value, tol))?;
    let pairs: Vec<(f64, f64)> = deltas.windows(2).map(|w| (w[0], w[1])).collect();
    records.extend(par_map(&pairs, |&(a, b)| {
        verifier::tka_stabilization(&ctx, a, b, env_c.c_tka, tol)
    })?);
    Ok(records)
}

fn check_anchor(anchor: f64) -> CliResult<()> {
    if anchor >= aas::ANCHOR_MIN && anchor.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "scan anchor must be at least 1e3",
            value: anchor,
        }
        .into())
    }
}

fn scan(
    ctx: &HlContext,
    grid: &[f64],
    tau: f64,
    kind: AnchorKind,
    anchor: f64,
    settings: &AasSettings,
) -> CliResult<ScanReport> {
    let parts = par_map(grid, |&t| aas::candidates_at(ctx, t, tau, kind, anchor, settings))?;
    let mut report = ScanReport {
        grid_points: grid.len(),
        ..ScanReport::default()
    };
    for (found, roots) in parts {
        report.candidates.extend(found);
        report.prefiltered += roots;
    }
    aas::sort_candidates(&mut report.candidates);
    Ok(report)
}

/// Parallel chords at T₀, one grid point per task.
pub fn scan_parallel(env: &Env, t0: f64, settings: &AasSettings) -> CliResult<ScanReport> {
    check_anchor(t0)?;
    let ctx = env.context(t0 + 2.0 * params::u0(t0, settings.epsilon))?;
    scan(
        &ctx,
        &aas::parallel_grid(t0, settings),
        1.0,
        AnchorKind::T0,
        t0,
        settings,
    )
}

/// Rotating chords at γ for each direction, one (τ, grid point) per task.
pub fn scan_rotating(env: &Env, gamma: f64, taus: &[f64], settings: &AasSettings) -> CliResult<Vec<(f64, ScanReport)>> {
    check_anchor(gamma)?;
    for &tau in taus {
        if !(tau >= settings.eta && tau <= 1.0 - settings.eta) {
            return Err(Error::Domain {
                what: "rotating chords need tau in [eta, 1 - eta]",
                value: tau,
            }
            .into());
        }
    }
    let ctx = env.context(gamma + 2.0 * params::u0(gamma, settings.epsilon))?;
    let grid = aas::rotating_grid(gamma, settings);
    taus.iter()
        .map(|&tau| Ok((tau, scan(&ctx, &grid, tau, AnchorKind::Gamma, gamma, settings)?)))
        .collect()
}

/// First zero at or above `t`.
pub fn anchor_zero(env: &Env, t: f64) -> CliResult<f64> {
    let table = env.cache.zeros(&ZFunction::new(), t, t + ANCHOR_SEARCH)?;
    Ok(table.nearest_zero_at_or_above(t)?)
}

pub fn certificate_output(candidates: &[AasCandidate]) -> Output {
    let mut out = Output::certificates();
    for c in candidates {
        out.push_certificate(c);
    }
    out
}

pub fn histogram_output(h: &Histogram) -> Output {
    let mut out = Output::new(vec!["lo", "hi", "count"]);
    let bins = h.counts.len();
    let width = (h.hi - h.lo) / bins as f64;
    for (i, &n) in h.counts.iter().enumerate() {
        let a = h.lo + i as f64 * width;
        let b = if i + 1 == bins { h.hi } else { a + width };
        out.push_numbers(&[a, b, n as f64]);
    }
    out
}

/// Writes the candidate histogram when a path is given.
pub fn write_histogram(candidates: &[AasCandidate], bins: usize, path: Option<&Path>) -> CliResult<()> {
    if let Some(p) = path {
        histogram_output(&aas::density_report(candidates, bins)?).emit(Some(p))?;
    }
    Ok(())
}

/// The moment table a ladder solution at `t` uses: [0, 24T] in steps of 10.
pub fn ladder_table(full: &MomentTable, t: f64) -> CliResult<MomentTable> {
    let panels = (LADDER_COVER * t / STEP).ceil() as usize;
    if panels > full.moments().len() {
        return Err(Error::Range {
            what: "moment table shorter than the ladder needs",
            value: LADDER_COVER * t,
            covered: (0.0, full.coverage()),
        }
        .into());
    }
    Ok(MomentTable::from_moments(STEP, full.moments()[..panels].to_vec())?)
}

fn ladder_inputs(env: &Env, ts: &[f64]) -> CliResult<(HlContext, MomentTable)> {
    let t_max = max_of(ts);
    let ctx = env.context(t_max)?;
    let table = env.cache.moments(&ctx, LADDER_COVER * t_max)?;
    Ok((ctx, table))
}

fn solve(env: &Env, ctx: &HlContext, full: &MomentTable, t: f64) -> CliResult<(LadderSample, f64)> {
    let tol = env.cfg.rel_tol_verify;
    let table = ladder_table(full, t)?;
    let sample = ladder::solve_ladder(ctx, &table, t, tol)?;
    let integral = table.cumulative().cumulative_z2(ctx, t, tol)?;
    Ok((sample, integral))
}

/// Ladder samples with their integrals ∫₀^T Z².
pub fn ladder_samples(env: &Env, ts: &[f64]) -> CliResult<Vec<(LadderSample, f64)>> {
    let (ctx, table) = ladder_inputs(env, ts)?;
    ts.par_iter().map(|&t| solve(env, &ctx, &table, t)).collect()
}

pub fn ladder_cmd(env: &Env, ts: &[f64]) -> CliResult<Output> {
    let mut out = Output::new(vec!["T", "phi", "residual"]);
    for (s, _) in ladder_samples(env, ts)? {
        out.push_numbers(&[s.t, s.phi, s.equation_residual]);
        if !(s.equation_residual <= LADDER_TOL) {
            out.failed += 1;
        }
    }
    Ok(out)
}

/// Almost-exact records at each T, with c₀ fitted at `c0_at`.
pub fn almost_exact_records(env: &Env, ts: &[f64], c0_at: f64) -> CliResult<(f64, Vec<VerificationRecord>)> {
    let mut all = vec![c0_at];
    all.extend_from_slice(ts);
    let samples = ladder_samples(env, &all)?;
    let (s0, i0) = &samples[0];
    let c0 = ladder::calibrate_c0(*i0, s0);
    let c = env.envelopes().c_almost_exact;
    let records = samples[1..]
        .iter()
        .map(|(s, i)| ladder::almost_exact_check(*i, s, c0, c))
        .collect();
    Ok((c0, records))
}

pub fn multiplicative(env: &Env, ts: &[f64], us: &[f64]) -> CliResult<Vec<VerificationRecord>> {
    let ctx = env.context(max_of(ts))?;
    let (kappa, eps, tol) = (env.cfg.kappa, env.cfg.epsilon, env.cfg.rel_tol_verify);
    let pairs = grid2(ts, us);
    par_map(&pairs, |&(t, u)| {
        ladder::multiplicative_check(&ctx, t, u, kappa, eps, tol)
    })
}

#[derive(Default)]
struct Tally {
    records: usize,
    passed: usize,
    worst: f64,
}

/// Per-formula and per-direction summary of record and certificate files.
pub fn report_cmd(inputs: &[&Path]) -> CliResult<Output> {
    let mut groups: BTreeMap<(String, String), Tally> = BTreeMap::new();
    for path in inputs {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(*path, e))?;
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let v: Value = serde_json::from_str(line)?;
            let bad = || {
                CliError::Usage(format!(
                    "{}:{}: neither a record nor a certificate",
                    path.display(),
                    i + 1
                ))
            };
            let f = |k: &str| v.get(k).and_then(Value::as_f64);
            let (key, pass, worst) = if let Some(name) = v.get("formula").and_then(Value::as_str) {
                let (r, b, c) = (f("residual"), f("bound"), f("constant"));
                let (Some(r), Some(b), Some(c)) = (r, b, c) else {
                    return Err(bad());
                };
                let pass = v.get("pass").and_then(Value::as_bool).ok_or_else(bad)?;
                (("record".to_string(), name.to_string()), pass, r.abs() / (b / c))
            } else if let Some(kind) = v.get("anchor_kind").and_then(Value::as_str) {
                let tau = f("tau_target").ok_or_else(bad)?;
                let pass = v.get("certified").and_then(Value::as_bool).ok_or_else(bad)?;
                let worst = f("residual").zip(f("tolerance")).map_or(f64::NAN, |(r, t)| r / t);
                (
                    ("certificate".to_string(), format!("{kind} tau={}", num(tau))),
                    pass,
                    worst,
                )
            } else {
                return Err(bad());
            };
            let t = groups.entry(key).or_default();
            t.records += 1;
            t.passed += usize::from(pass);
            t.worst = t.worst.max(worst);
        }
    }
    let mut out = Output::new(vec!["kind", "key", "records", "passed", "worst_normalized"]);
    for ((kind, key), t) in groups {
        out.rows.push(vec![
            kind.clone(),
            key.clone(),
            t.records.to_string(),
            t.passed.to_string(),
            num(t.worst),
        ]);
        out.json.push(serde_json::json!({
            "kind": kind,
            "key": key,
            "records": t.records,
            "passed": t.passed,
            "worst_normalized": crate::records::jnum(t.worst),
        }));
        out.failed += t.records - t.passed;
    }
    Ok(out)
}

/// Largest normalized residual, i.e. the smallest constant that passes all.
pub fn worst_normalized(records: &[VerificationRecord]) -> f64 {
    records.iter().map(normalized).fold(0.0, f64::max)
}
