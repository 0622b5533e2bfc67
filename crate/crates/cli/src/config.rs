//! Run configuration: compiled-in defaults, then a TOML file, then flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zeta_chords_core::params;
use zeta_chords_core::verifier::Envelopes;

use crate::error::{CliError, CliResult};

/// Environment variable that overrides `cache_dir` from the config file.
pub const CACHE_ENV: &str = "ZETA_CHORDS_CACHE";

/// Where tables are cached when nothing else says so.
pub const DEFAULT_CACHE_DIR: &str = ".zeta-chords-cache";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub epsilon: f64,
    pub eta: f64,
    pub kappa: f64,
    pub rel_tol_verify: f64,
    pub rel_tol_sweep: f64,
    pub threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_cache_dir: Option<PathBuf>,
    pub envelopes: EnvelopeConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            epsilon: params::EPSILON,
            eta: params::ETA,
            kappa: params::KAPPA,
            rel_tol_verify: params::REL_TOL_VERIFY,
            rel_tol_sweep: params::REL_TOL_SWEEP,
            threads: 1,
            cache_dir: None,
            zero_cache_dir: None,
            envelopes: EnvelopeConfig::default(),
            provenance: None,
        }
    }
}

/// The `[envelopes]` table; mirrors [`Envelopes`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvelopeConfig {
    pub c_lemma1: f64,
    pub c_lemma2: f64,
    pub c_hl_main: f64,
    pub c_bala: f64,
    pub c_short: f64,
    pub c_ivic: f64,
    pub c_tka_value: f64,
    pub c_tka: f64,
    pub c_almost_exact: f64,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        Envelopes::default().into()
    }
}

impl From<Envelopes> for EnvelopeConfig {
    fn from(e: Envelopes) -> Self {
        Self {
            c_lemma1: e.c_lemma1,
            c_lemma2: e.c_lemma2,
            c_hl_main: e.c_hl_main,
            c_bala: e.c_bala,
            c_short: e.c_short,
            c_ivic: e.c_ivic,
            c_tka_value: e.c_tka_value,
            c_tka: e.c_tka,
            c_almost_exact: e.c_almost_exact,
        }
    }
}

impl From<EnvelopeConfig> for Envelopes {
    fn from(e: EnvelopeConfig) -> Self {
        Self {
            c_lemma1: e.c_lemma1,
            c_lemma2: e.c_lemma2,
            c_hl_main: e.c_hl_main,
            c_bala: e.c_bala,
            c_short: e.c_short,
            c_ivic: e.c_ivic,
            c_tka_value: e.c_tka_value,
            c_tka: e.c_tka,
            c_almost_exact: e.c_almost_exact,
        }
    }
}

/// Written by `calibrate` next to the constants it produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub date: String,
    pub code_version: String,
    pub suite: String,
    pub seed: u64,
    pub ranges: Vec<String>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |what: &str, v: f64| Err(CliError::Config(format!("{what} (got {v})")));
        if !(self.epsilon > 0.0 && self.epsilon < 1.0 / 12.0) {
            return bad("epsilon must lie in (0, 1/12)", self.epsilon);
        }
        if !(self.eta > 0.0 && self.eta < 0.5) {
            return bad("eta must lie in (0, 1/2)", self.eta);
        }
        if !(self.kappa > 0.0) {
            return bad("kappa must be positive", self.kappa);
        }
        for (name, v) in [
            ("rel_tol_verify", self.rel_tol_verify),
            ("rel_tol_sweep", self.rel_tol_sweep),
        ] {
            if !(1e-10..=1e-2).contains(&v) {
                return Err(CliError::Config(format!("{name} must lie in [1e-10, 1e-2] (got {v})")));
            }
        }
        if self.threads == 0 {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        let e = &self.envelopes;
        for (name, v) in [
            ("c_lemma1", e.c_lemma1),
            ("c_lemma2", e.c_lemma2),
            ("c_hl_main", e.c_hl_main),
            ("c_bala", e.c_bala),
            ("c_short", e.c_short),
            ("c_ivic", e.c_ivic),
            ("c_tka_value", e.c_tka_value),
            ("c_tka", e.c_tka),
            ("c_almost_exact", e.c_almost_exact),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("envelope {name} must be positive (got {v})")));
            }
        }
        Ok(())
    }

    pub fn envelopes(&self) -> Envelopes {
        self.envelopes.into()
    }

    /// Cache directory: `flag`, else the environment, else the config,
    /// else [`DEFAULT_CACHE_DIR`].
    pub fn resolve_cache_dir(&self, flag: Option<&Path>) -> PathBuf {
        if let Some(p) = flag {
            return p.to_path_buf();
        }
        if let Some(p) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
            return PathBuf::from(p);
        }
        self.cache_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn partial_files_keep_defaults() {
        let cfg = RunConfig::from_toml("kappa = 2.5\n[envelopes]\nc_lemma2 = 7.0\n").unwrap();
        assert_eq!(cfg.kappa, 2.5);
        assert_eq!(cfg.envelopes.c_lemma2, 7.0);
        assert_eq!(cfg.envelopes.c_bala, EnvelopeConfig::default().c_bala);
        assert_eq!(cfg.epsilon, params::EPSILON);
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(RunConfig::from_toml("epsilon = 0.1").is_err());
        assert!(RunConfig::from_toml("eta = 0.5").is_err());
        assert!(RunConfig::from_toml("kappa = 0.0").is_err());
        assert!(RunConfig::from_toml("threads = 0").is_err());
        assert!(RunConfig::from_toml("[envelopes]\nc_bala = -1.0").is_err());
        assert!(RunConfig::from_toml("unknown = 1").is_err());
    }
}
