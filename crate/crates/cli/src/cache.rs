//! On-disk caches for the divisor, moment and zero tables.
//!
//! Binary files are little-endian. Every file starts with a 4-byte magic
//! and a `u32` format version:
//!
//! * `DIVT` divisor table: `u64` N, then d(1..=N) as `u32`.
//! * `CZ2M` moment table: `f64` step, `u64` panel count, then 13 `f64` per
//!   panel.
//! * `CZ2T` cumulative table: `f64` step, `u64` checkpoint count, then the
//!   checkpoints as `f64`.
//!
//! Table files have a JSON sidecar with their build parameters. A cached
//! table is reused when it covers the request and was built with the same
//! parameters; it is then truncated to exactly what a fresh build would
//! produce, so results never depend on what happened to be cached.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use zeta_chords_core::hl_core::HlContext;
use zeta_chords_core::ladder::{MomentTable, MOMENTS, STEP};
use zeta_chords_core::math::TAU;
use zeta_chords_core::special_fn::{DivisorTable, ZFunction, DEFAULT_BUDGET};
use zeta_chords_core::zeros::{self, ZeroTable};

use crate::error::{CliError, CliResult};
use crate::format;

pub const FORMAT_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Quadrature tolerance for every cached moment table.
pub const TABLE_REL_TOL: f64 = 1e-10;
/// Moment panels per parallel work item.
const BLOCK: usize = 64;

const DIVT: &[u8; 4] = b"DIVT";
const CZ2M: &[u8; 4] = b"CZ2M";
const CZ2T: &[u8; 4] = b"CZ2T";

/// A cache directory, or none at all.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
    zero_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct TableSidecar {
    kind: String,
    step: f64,
    count: u64,
    coverage: f64,
    rel_tol: f64,
    code_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSidecar {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub complete: bool,
    pub code_version: String,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>, zero_dir: Option<PathBuf>) -> Self {
        Self { dir, zero_dir }
    }

    /// Nothing is read or written.
    pub fn disabled() -> Self {
        Self::new(None, None)
    }

    fn file(&self, name: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(name))
    }

    /// Divisor table with N = ⌈t_max/2π⌉ + 1, the size [`HlContext::new`]
    /// would build.
    pub fn divisors(&self, t_max: f64) -> CliResult<DivisorTable> {
        let limit = (t_max.max(100.0) / TAU).ceil() as u64 + 1;
        let path = self.file("divisors.bin");
        if let Some(p) = path.as_deref().filter(|p| p.exists()) {
            let values = read_divisors(p)?;
            if values.len() as u64 >= limit {
                return Ok(DivisorTable::from_values(&values[..limit as usize])?);
            }
        }
        let table = DivisorTable::new(limit, DEFAULT_BUDGET)?;
        if let Some(p) = path {
            write_atomic(&p, &encode_divisors(table.values()))?;
        }
        Ok(table)
    }

    pub fn context(&self, t_max: f64) -> CliResult<HlContext> {
        Ok(HlContext::from_divisors(self.divisors(t_max)?))
    }

    /// Moment table covering [0, t_max] with step [`STEP`] at
    /// [`TABLE_REL_TOL`].
    pub fn moments(&self, ctx: &HlContext, t_max: f64) -> CliResult<MomentTable> {
        let panels = (t_max / STEP).ceil() as usize;
        let bin = self.file("moments.bin");
        let side = self.file("moments.json");
        if let (Some(b), Some(s)) = (bin.as_deref(), side.as_deref()) {
            if b.exists() && s.exists() {
                let meta: TableSidecar = read_json(s)?;
                if meta.step == STEP && meta.rel_tol == TABLE_REL_TOL && meta.count as usize >= panels {
                    let (step, mut m) = read_moments(b)?;
                    if step == STEP && m.len() >= panels {
                        m.truncate(panels);
                        return Ok(MomentTable::from_moments(STEP, m)?);
                    }
                }
            }
        }
        let table = build_moments(ctx, panels)?;
        if let (Some(b), Some(s)) = (bin, side) {
            write_atomic(&b, &encode_moments(STEP, table.moments()))?;
            write_json(&s, &sidecar("moments", &table, table.moments().len()))?;
            let cum = table.cumulative();
            write_atomic(
                &b.with_file_name("cumulative.bin"),
                &encode_cumulative(cum.step(), cum.values()),
            )?;
            write_json(
                &s.with_file_name("cumulative.json"),
                &sidecar("cumulative", &table, cum.values().len()),
            )?;
        }
        Ok(table)
    }

    /// Zeros on (lo, hi). Complete tables are cached under the zero
    /// directory; incomplete ones are recomputed every time.
    pub fn zeros(&self, z: &ZFunction, lo: f64, hi: f64) -> CliResult<ZeroTable> {
        let stem = format!("zeros_{}_{}", format::num(lo), format::num(hi));
        let dir = self.zero_dir.as_ref().or(self.dir.as_ref());
        let paths = dir.map(|d| (d.join(format!("{stem}.csv")), d.join(format!("{stem}.json"))));
        if let Some((csv, json)) = paths.as_ref().filter(|(c, j)| c.exists() && j.exists()) {
            let meta: ZeroSidecar = read_json(json)?;
            if meta.complete && meta.lo == lo && meta.hi == hi {
                let zeros = read_zero_csv(csv)?;
                if zeros.len() == meta.count {
                    return Ok(ZeroTable {
                        lo,
                        hi,
                        zeros,
                        complete: true,
                        suspects: Vec::new(),
                    });
                }
            }
        }
        let table = zeros::find_zeros(z, lo, hi)?;
        if let (Some((csv, json)), true) = (paths, table.complete) {
            write_atomic(&csv, zero_csv(&table.zeros).as_bytes())?;
            write_json(
                &json,
                &ZeroSidecar {
                    lo,
                    hi,
                    count: table.zeros.len(),
                    complete: true,
                    code_version: CODE_VERSION.to_string(),
                },
            )?;
        }
        Ok(table)
    }
}

fn sidecar(kind: &str, table: &MomentTable, count: usize) -> TableSidecar {
    TableSidecar {
        kind: kind.to_string(),
        step: STEP,
        count: count as u64,
        coverage: table.coverage(),
        rel_tol: TABLE_REL_TOL,
        code_version: CODE_VERSION.to_string(),
    }
}

/// Builds `panels` moment panels in parallel blocks and joins them in order.
pub fn build_moments(ctx: &HlContext, panels: usize) -> CliResult<MomentTable> {
    let blocks: Vec<(usize, usize)> = (0..panels)
        .step_by(BLOCK)
        .map(|a| (a, (a + BLOCK).min(panels)))
        .collect();
    let parts = blocks
        .par_iter()
        .map(|&(a, b)| MomentTable::build_range(ctx, a, b, STEP, TABLE_REL_TOL).map(|(m, _)| m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MomentTable::from_moments(STEP, parts.concat())?)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn header(magic: &[u8; 4]) -> Vec<u8> {
    let mut out = magic.to_vec();
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out
}

/// Checks magic and version, returning the payload.
fn payload<'a>(path: &Path, bytes: &'a [u8], magic: &[u8; 4]) -> CliResult<&'a [u8]> {
    let bad = |reason: String| CliError::Cache {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < 8 || &bytes[..4] != magic {
        return Err(bad(format!("missing {} header", String::from_utf8_lossy(magic))));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != FORMAT_VERSION {
        return Err(bad(format!("format version {version}, expected {FORMAT_VERSION}")));
    }
    Ok(&bytes[8..])
}

struct Reader<'a> {
    path: &'a Path,
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> CliResult<[u8; N]> {
        if self.bytes.len() < N {
            return Err(CliError::Cache {
                path: self.path.to_path_buf(),
                reason: "truncated file".into(),
            });
        }
        let (head, rest) = self.bytes.split_at(N);
        self.bytes = rest;
        Ok(head.try_into().expect("N bytes"))
    }

    fn u32(&mut self) -> CliResult<u32> {
        self.take().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> CliResult<u64> {
        self.take().map(u64::from_le_bytes)
    }

    fn f64(&mut self) -> CliResult<f64> {
        self.take().map(f64::from_le_bytes)
    }

    fn finish(self) -> CliResult<()> {
        if self.bytes.is_empty() {
            Ok(())
        } else {
            Err(CliError::Cache {
                path: self.path.to_path_buf(),
                reason: format!("{} trailing bytes", self.bytes.len()),
            })
        }
    }
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn encode_divisors(values: &[u32]) -> Vec<u8> {
    let mut out = header(DIVT);
    out.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn read_divisors(path: &Path) -> CliResult<Vec<u32>> {
    let bytes = read_file(path)?;
    let mut r = Reader {
        path,
        bytes: payload(path, &bytes, DIVT)?,
    };
    let n = r.u64()?;
    let values = (0..n).map(|_| r.u32()).collect::<CliResult<Vec<_>>>()?;
    r.finish()?;
    Ok(values)
}

pub fn encode_moments(step: f64, moments: &[[f64; MOMENTS]]) -> Vec<u8> {
    let mut out = header(CZ2M);
    out.extend_from_slice(&step.to_le_bytes());
    out.extend_from_slice(&(moments.len() as u64).to_le_bytes());
    for m in moments {
        for v in m {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn read_moments(path: &Path) -> CliResult<(f64, Vec<[f64; MOMENTS]>)> {
    let bytes = read_file(path)?;
    let mut r = Reader {
        path,
        bytes: payload(path, &bytes, CZ2M)?,
    };
    let step = r.f64()?;
    let n = r.u64()?;
    let mut moments = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let mut m = [0.0; MOMENTS];
        for v in m.iter_mut() {
            *v = r.f64()?;
        }
        moments.push(m);
    }
    r.finish()?;
    Ok((step, moments))
}

pub fn encode_cumulative(step: f64, values: &[f64]) -> Vec<u8> {
    let mut out = header(CZ2T);
    out.extend_from_slice(&step.to_le_bytes());
    out.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn read_cumulative(path: &Path) -> CliResult<(f64, Vec<f64>)> {
    let bytes = read_file(path)?;
    let mut r = Reader {
        path,
        bytes: payload(path, &bytes, CZ2T)?,
    };
    let step = r.f64()?;
    let n = r.u64()?;
    let values = (0..n).map(|_| r.f64()).collect::<CliResult<Vec<_>>>()?;
    r.finish()?;
    Ok((step, values))
}

pub fn zero_csv(zeros: &[f64]) -> String {
    let mut out = String::from("gamma\n");
    for &g in zeros {
        out.push_str(&format::gamma(g));
        out.push('\n');
    }
    out
}

pub fn read_zero_csv(path: &Path) -> CliResult<Vec<f64>> {
    let mut rdr = csv::Reader::from_path(path)?;
    if rdr.headers()?.iter().collect::<Vec<_>>() != ["gamma"] {
        return Err(CliError::Cache {
            path: path.to_path_buf(),
            reason: "expected a single \"gamma\" column".into(),
        });
    }
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            rec[0].parse::<f64>().map_err(|e| CliError::Cache {
                path: path.to_path_buf(),
                reason: format!("bad zero {:?}: {e}", &rec[0]),
            })
        })
        .collect()
}
