//! Envelope calibration: each suite measures the smallest constant that
//! passes its pilot sample and freezes twice that, rounded up to two
//! significant digits.

use std::path::Path;

use clap::ValueEnum;
use zeta_chords_core::verifier::{Envelopes, FormulaId, VerificationRecord};

use crate::cache::CODE_VERSION;
use crate::commands::{self, Env};
use crate::config::{Provenance, RunConfig};
use crate::error::{CliError, CliResult};
use crate::format::num;
use crate::records::{jnum, Output};

/// Factor between the pilot maximum and the frozen constant.
pub const SAFETY: f64 = 2.0;
/// Fewest records a suite may calibrate on.
pub const MIN_SAMPLES: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Lemma2,
    HlMain,
    Bala,
    Short,
    Tka,
    AlmostExact,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lemma2,
        Suite::HlMain,
        Suite::Bala,
        Suite::Short,
        Suite::Tka,
        Suite::AlmostExact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma2 => "lemma2",
            Suite::HlMain => "hl_main",
            Suite::Bala => "bala",
            Suite::Short => "short",
            Suite::Tka => "tka",
            Suite::AlmostExact => "almost_exact",
        }
    }
}

/// Pilot sizes and ranges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pilot {
    pub seed: u64,
    pub samples: usize,
    pub t_min: f64,
    pub t_max: f64,
}

impl Default for Pilot {
    fn default() -> Self {
        Self {
            seed: 1,
            samples: 100,
            t_min: 1e3,
            t_max: 1e5,
        }
    }
}

pub const BALA_POINTS: [f64; 3] = [1e3, 1e4, 1e5];
pub const SHORT_POINTS: [f64; 2] = [1e4, 1e5];
pub const TKA_DELTAS: [f64; 2] = [0.01, 0.02];
pub const ALMOST_EXACT_C0_AT: f64 = 1e3;
pub const ALMOST_EXACT_POINTS: [f64; 3] = [2e3, 5e3, 1e4];

/// One frozen constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Calibrated {
    pub name: &'static str,
    pub samples: usize,
    pub worst: f64,
    pub constant: f64,
}

/// `SAFETY·worst` rounded up to two significant digits.
pub fn envelope_constant(worst: f64) -> CliResult<f64> {
    let x = SAFETY * worst;
    if !(x > 0.0 && x.is_finite()) {
        return Err(CliError::Calibration(format!("pilot maximum {worst} is not positive")));
    }
    let scale = 10f64.powi(x.log10().floor() as i32 - 1);
    let digits = (x / scale * (1.0 - 1e-12)).ceil();
    Ok(format!("{:.1e}", digits * scale).parse().expect("float"))
}

fn calibrated(name: &'static str, records: &[VerificationRecord]) -> CliResult<Calibrated> {
    calibrated_from(name, records.len(), commands::worst_normalized(records))
}

fn calibrated_from(name: &'static str, samples: usize, worst: f64) -> CliResult<Calibrated> {
    if samples < MIN_SAMPLES {
        return Err(CliError::Calibration(format!(
            "{name}: {samples} samples, need {MIN_SAMPLES}"
        )));
    }
    Ok(Calibrated {
        name,
        samples,
        worst,
        constant: envelope_constant(worst)?,
    })
}

/// Runs one suite and returns the constants it determines.
pub fn run_suite(env: &Env, suite: Suite, pilot: &Pilot) -> CliResult<Vec<Calibrated>> {
    Ok(match suite {
        Suite::Lemma2 => {
            let ts = commands::log_uniform_sample(pilot.seed, pilot.samples, pilot.t_min, pilot.t_max);
            vec![calibrated("c_lemma2", &commands::lemma2(env, &ts, None)?)?]
        }
        Suite::HlMain => {
            let ts = commands::log_uniform_sample(pilot.seed, 2 * pilot.samples, pilot.t_min, pilot.t_max);
            vec![calibrated("c_hl_main", &commands::hl_main(env, &ts)?)?]
        }
        Suite::Bala => vec![calibrated("c_bala", &commands::bala(env, &BALA_POINTS)?)?],
        Suite::Short => vec![calibrated("c_short", &commands::short_interval(env, &SHORT_POINTS)?)?],
        Suite::Tka => {
            let (values, pairs): (Vec<_>, Vec<_>) = commands::tka(env, &TKA_DELTAS)?
                .into_iter()
                .partition(|r| r.formula == FormulaId::Tka);
            vec![
                calibrated_from("c_tka_value", values.len(), commands::worst_normalized(&values))?,
                calibrated_from("c_tka", pairs.len(), commands::worst_normalized(&pairs))?,
            ]
        }
        Suite::AlmostExact => {
            let (_, recs) = commands::almost_exact_records(env, &ALMOST_EXACT_POINTS, ALMOST_EXACT_C0_AT)?;
            vec![calibrated("c_almost_exact", &recs)?]
        }
    })
}

pub fn apply(envelopes: &mut Envelopes, constants: &[Calibrated]) {
    for c in constants {
        let slot = match c.name {
            "c_lemma2" => &mut envelopes.c_lemma2,
            "c_hl_main" => &mut envelopes.c_hl_main,
            "c_bala" => &mut envelopes.c_bala,
            "c_short" => &mut envelopes.c_short,
            "c_tka_value" => &mut envelopes.c_tka_value,
            "c_tka" => &mut envelopes.c_tka,
            "c_almost_exact" => &mut envelopes.c_almost_exact,
            _ => continue,
        };
        *slot = c.constant;
    }
}

fn ranges(suites: &[Suite], pilot: &Pilot) -> Vec<String> {
    let list = |xs: &[f64]| xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",");
    suites
        .iter()
        .map(|s| match s {
            Suite::Lemma2 | Suite::HlMain => format!(
                "{}: {} log-uniform T in [{}, {}]",
                s.name(),
                if *s == Suite::Lemma2 {
                    pilot.samples
                } else {
                    2 * pilot.samples
                },
                num(pilot.t_min),
                num(pilot.t_max)
            ),
            Suite::Bala => format!("bala: T in {{{}}}", list(&BALA_POINTS)),
            Suite::Short => format!("short: T in {{{}}}", list(&SHORT_POINTS)),
            Suite::Tka => format!("tka: delta in {{{}}}", list(&TKA_DELTAS)),
            Suite::AlmostExact => format!(
                "almost_exact: c0 at T = {}, T in {{{}}}",
                num(ALMOST_EXACT_C0_AT),
                list(&ALMOST_EXACT_POINTS)
            ),
        })
        .collect()
}

/// Runs the suites, writes the updated config to `write` when given and
/// returns the constants as a table.
pub fn calibrate(env: &Env, suites: &[Suite], pilot: &Pilot, date: &str, write: Option<&Path>) -> CliResult<Output> {
    let mut all = Vec::new();
    for &s in suites {
        all.extend(run_suite(env, s, pilot)?);
    }
    let mut out = Output::new(vec!["name", "samples", "worst_normalized", "constant"]);
    for c in &all {
        out.rows.push(vec![
            c.name.to_string(),
            c.samples.to_string(),
            num(c.worst),
            num(c.constant),
        ]);
        out.json.push(serde_json::json!({
            "name": c.name,
            "samples": c.samples,
            "worst_normalized": jnum(c.worst),
            "constant": jnum(c.constant),
        }));
    }
    if let Some(path) = write {
        let mut cfg: RunConfig = env.cfg.clone();
        let mut e = cfg.envelopes();
        apply(&mut e, &all);
        cfg.envelopes = e.into();
        cfg.provenance = Some(Provenance {
            date: date.to_string(),
            code_version: CODE_VERSION.to_string(),
            suite: suites.iter().map(|s| s.name()).collect::<Vec<_>>().join(","),
            seed: pilot.seed,
            ranges: ranges(suites, pilot),
        });
        cfg.validate()?;
        std::fs::write(path, cfg.to_toml()).map_err(|e| CliError::io(path, e))?;
    }
    Ok(out)
}

/// `--date`, else `SOURCE_DATE_EPOCH`, else today (UTC).
pub fn provenance_date(flag: Option<&str>) -> CliResult<String> {
    if let Some(d) = flag {
        return Ok(d.to_string());
    }
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        let secs: i64 = epoch
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("SOURCE_DATE_EPOCH is not an integer: {epoch:?}")))?;
        let dt = chrono::DateTime::from_timestamp(secs, 0)
            .ok_or_else(|| CliError::Config(format!("SOURCE_DATE_EPOCH out of range: {secs}")))?;
        return Ok(dt.format("%Y-%m-%d").to_string());
    }
    Ok(chrono::Utc::now().format("%Y-%m-%d").to_string())
}
