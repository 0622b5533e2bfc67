//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use zeta_chords_core::aas::{self, AasCandidate};

use crate::cache::Cache;
use crate::calibrate::{self, Pilot, Suite};
use crate::commands::{self, record_output, Env};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::format::num;
use crate::records::Output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "zeta-chords",
    version,
    about = "Short parts of the Hardy-Littlewood integral: sums, chords, ladders and residual checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct Global {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output file; `.jsonl` or `.json` selects JSON lines, anything else CSV.
    /// Without it, CSV goes to standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Table cache directory (overrides ZETA_CHORDS_CACHE and the config).
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Zero-table cache directory; defaults to the cache directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub zero_cache_dir: Option<PathBuf>,
    /// Do not read or write any cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub eta: Option<f64>,
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Quadrature tolerance for both verification runs and sweeps.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ϑ(t) exactly and asymptotically, against the 1/(6t) envelope.
    Theta {
        #[arg(long = "t", value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Hardy's Z(t).
    Zfun {
        #[arg(long = "t", value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// The divisor sum S(T, U) and τ̂ = S/ln T.
    Ssum(SegmentArgs),
    /// ∫ Z² over [T, T + U] with the derived segment quantities.
    Integrate(SegmentArgs),
    /// Zeros of Z on (lo, hi).
    Zeros {
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
    },
    /// Oscillatory integral against its closed form.
    Lemma1 {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long = "U", value_delimiter = ',', required = true)]
        u: Vec<f64>,
        #[arg(long = "n", value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Short-segment integral against the divisor sum.
    Lemma2 {
        /// Explicit T values; otherwise a seeded log-uniform sample.
        #[arg(long = "T", value_delimiter = ',')]
        t: Vec<f64>,
        /// Segment length; defaults to the short-segment window.
        #[arg(long = "U")]
        u: Option<f64>,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Remainder of the Balasubramanian mean-value formula.
    Bala {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Short-interval mean-value remainder.
    ShortInterval {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// ∫_{T−G}^{T+G} Z² / (G ln²T).
    Ivic {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// Half-width; defaults to ⌈T^(1/3 − 1/108)⌉.
        #[arg(long = "G")]
        g: Option<f64>,
    },
    /// Exponentially weighted second moment and its stabilization.
    Tka {
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.02])]
        delta: Vec<f64>,
    },
    /// Parallel chords (τ = 1) anchored at T0.
    AasParallel {
        #[arg(long = "T0")]
        t0: f64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Rotating chords anchored at a zero γ.
    AasRotating {
        /// The anchor; defaults to the first zero at or above --near.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 1e4)]
        near: f64,
        #[arg(long, value_delimiter = ',', default_values_t = commands::DEFAULT_TAUS)]
        tau: Vec<f64>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Solutions φ(T) of the ladder equation.
    Ladder {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Almost-exact formula with c₀ fitted at one T.
    AlmostExact {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1e3)]
        c0_at: f64,
    },
    /// Chord slope against τ̂ for 0 < U ≤ T/ln T.
    Multiplicative(SegmentArgs),
    /// Freezes envelope constants from pilot runs.
    Calibrate {
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<Suite>,
        #[command(flatten)]
        sample: SampleArgs,
        /// Config file to write with the new constants.
        #[arg(long, value_name = "FILE")]
        write: Option<PathBuf>,
        /// Provenance date; defaults to SOURCE_DATE_EPOCH, then today.
        #[arg(long)]
        date: Option<String>,
    },
    /// Pass counts and worst normalized residuals of JSON-lines artifacts.
    Report {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[arg(long = "T", value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
    #[arg(long = "U", value_delimiter = ',', required = true)]
    pub u: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e3)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1e5)]
    pub t_max: f64,
}

impl SampleArgs {
    fn pilot(&self) -> Pilot {
        Pilot {
            seed: self.seed,
            samples: self.samples,
            t_min: self.t_min,
            t_max: self.t_max,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Left ends per window.
    #[arg(long, default_value_t = aas::GRID)]
    pub grid: usize,
    /// Ũ steps of the pre-filter scan.
    #[arg(long, default_value_t = aas::N_SCAN)]
    pub n_scan: usize,
    /// Histogram of left ends, written as CSV.
    #[arg(long, value_name = "FILE")]
    pub histogram: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
}

/// Config file, then flags.
pub fn resolve_config(g: &Global) -> CliResult<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = g.epsilon {
        cfg.epsilon = v;
    }
    if let Some(v) = g.eta {
        cfg.eta = v;
    }
    if let Some(v) = g.kappa {
        cfg.kappa = v;
    }
    if let Some(v) = g.rel_tol {
        cfg.rel_tol_verify = v;
        cfg.rel_tol_sweep = v;
    }
    if let Some(v) = g.threads {
        cfg.threads = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn resolve_env(g: &Global) -> CliResult<Env> {
    let cfg = resolve_config(g)?;
    let cache = if g.no_cache {
        Cache::disabled()
    } else {
        let dir = cfg.resolve_cache_dir(g.cache_dir.as_deref());
        let zero_dir = g.zero_cache_dir.clone().or_else(|| cfg.zero_cache_dir.clone());
        Cache::new(Some(dir), zero_dir)
    };
    Ok(Env::new(cfg, cache))
}

fn scan_output(env: &Env, candidates: Vec<AasCandidate>, scan: &ScanArgs) -> CliResult<Output> {
    if !candidates.is_empty() {
        commands::write_histogram(&candidates, scan.bins, scan.histogram.as_deref())?;
    }
    let _ = env;
    Ok(commands::certificate_output(&candidates))
}

/// Runs one parsed command and returns its table.
pub fn execute(env: &Env, command: &Command) -> CliResult<Output> {
    Ok(match command {
        Command::Theta { t } => commands::theta_cmd(t)?,
        Command::Zfun { t } => commands::zfun_cmd(t)?,
        Command::Ssum(s) => commands::ssum_cmd(env, &s.t, &s.u)?,
        Command::Integrate(s) => commands::integrate_cmd(env, &s.t, &s.u)?,
        Command::Zeros { lo, hi } => commands::zeros_cmd(env, *lo, *hi)?,
        Command::Lemma1 { t, u, n } => record_output(&commands::lemma1(env, t, u, n)?),
        Command::Lemma2 { t, u, sample } => {
            let ts = if t.is_empty() {
                commands::log_uniform_sample(sample.seed, sample.samples, sample.t_min, sample.t_max)
            } else {
                t.clone()
            };
            record_output(&commands::lemma2(env, &ts, *u)?)
        }
        Command::Bala { t } => record_output(&commands::bala(env, t)?),
        Command::ShortInterval { t } => record_output(&commands::short_interval(env, t)?),
        Command::Ivic { t, g } => record_output(&commands::ivic(env, t, *g)?),
        Command::Tka { delta } => record_output(&commands::tka(env, delta)?),
        Command::AasParallel { t0, scan } => {
            let settings = env.aas_settings(scan.grid, scan.n_scan);
            let report = commands::scan_parallel(env, *t0, &settings)?;
            eprintln!(
                "T0 = {}: {} certified of {} pre-filtered on {} grid points",
                num(*t0),
                report.candidates.len(),
                report.prefiltered,
                report.grid_points
            );
            scan_output(env, report.candidates, scan)?
        }
        Command::AasRotating { gamma, near, tau, scan } => {
            let gamma = match gamma {
                Some(g) => *g,
                None => commands::anchor_zero(env, *near)?,
            };
            let settings = env.aas_settings(scan.grid, scan.n_scan);
            let mut all = Vec::new();
            for (tau, report) in commands::scan_rotating(env, gamma, tau, &settings)? {
                eprintln!(
                    "gamma = {}, tau = {}: {} certified of {} pre-filtered",
                    crate::format::gamma(gamma),
                    num(tau),
                    report.candidates.len(),
                    report.prefiltered
                );
                all.extend(report.candidates);
            }
            scan_output(env, all, scan)?
        }
        Command::Ladder { t } => commands::ladder_cmd(env, t)?,
        Command::AlmostExact { t, c0_at } => {
            let (c0, records) = commands::almost_exact_records(env, t, *c0_at)?;
            eprintln!("c0 = {} (fitted at T = {})", num(c0), num(*c0_at));
            record_output(&records)
        }
        Command::Multiplicative(s) => record_output(&commands::multiplicative(env, &s.t, &s.u)?),
        Command::Calibrate {
            suite,
            sample,
            write,
            date,
        } => {
            let suites = if suite.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suite.clone()
            };
            let date = calibrate::provenance_date(date.as_deref())?;
            calibrate::calibrate(env, &suites, &sample.pilot(), &date, write.as_deref())?
        }
        Command::Report { input } => {
            let paths: Vec<&std::path::Path> = input.iter().map(PathBuf::as_path).collect();
            commands::report_cmd(&paths)?
        }
    })
}

fn run_parsed(cli: &Cli) -> CliResult<Output> {
    let env = resolve_env(&cli.global)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(env.cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let out = pool.install(|| execute(&env, &cli.command))?;
    out.emit(cli.global.out.as_deref())?;
    Ok(out)
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_parsed(&cli) {
        Ok(out) if out.failed > 0 => {
            eprintln!("{} record(s) failed", out.failed);
            EXIT_FAILED
        }
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                EXIT_USAGE
            } else {
                EXIT_ERROR
            }
        }
    }
}
