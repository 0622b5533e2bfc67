//! Output tables: one CSV header plus rows, and the matching JSON lines.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Number, Value};
use zeta_chords_core::aas::AasCandidate;
use zeta_chords_core::verifier::VerificationRecord;

use crate::error::{CliError, CliResult};
use crate::format::num;

/// Everything a subcommand emits.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Output {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Vec<Value>,
    /// Records that failed their check; any failure makes the exit status 2.
    pub failed: usize,
}

/// Serialization chosen from the `--out` extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "json") => Format::JsonLines,
            _ => Format::Csv,
        }
    }
}

/// A JSON number with the 12 significant digits of [`num`]; `null` when not
/// finite.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&num(x)).expect("formatted numbers are valid JSON"))
    } else {
        Value::Null
    }
}

fn jmap(pairs: &[(&'static str, f64)]) -> Value {
    Value::Object(pairs.iter().map(|&(k, v)| (k.to_string(), jnum(v))).collect())
}

fn pairs_text(pairs: &[(&'static str, f64)]) -> String {
    pairs
        .iter()
        .map(|&(k, v)| format!("{k}={}", num(v)))
        .collect::<Vec<_>>()
        .join(";")
}

/// |residual| / (bound/constant): the smallest constant that would pass.
pub fn normalized(r: &VerificationRecord) -> f64 {
    r.residual.abs() / (r.bound / r.constant)
}

impl Output {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            ..Self::default()
        }
    }

    /// Adds a row given as (column, value) pairs in header order.
    pub fn push_numbers(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.header.len());
        self.rows.push(values.iter().map(|&v| num(v)).collect());
        let obj: Map<String, Value> = self
            .header
            .iter()
            .zip(values)
            .map(|(k, &v)| (k.to_string(), jnum(v)))
            .collect();
        self.json.push(Value::Object(obj));
    }

    pub fn records() -> Self {
        Self::new(vec![
            "formula",
            "inputs",
            "residual",
            "bound",
            "constant",
            "normalized",
            "pass",
            "diagnostics",
        ])
    }

    pub fn push_record(&mut self, r: &VerificationRecord) {
        self.rows.push(vec![
            r.formula.name().to_string(),
            pairs_text(&r.inputs),
            num(r.residual),
            num(r.bound),
            num(r.constant),
            num(normalized(r)),
            r.pass.to_string(),
            pairs_text(&r.diagnostics),
        ]);
        let mut obj = Map::new();
        obj.insert("formula".into(), Value::String(r.formula.name().into()));
        obj.insert("inputs".into(), jmap(&r.inputs));
        obj.insert("residual".into(), jnum(r.residual));
        obj.insert("bound".into(), jnum(r.bound));
        obj.insert("constant".into(), jnum(r.constant));
        obj.insert("pass".into(), Value::Bool(r.pass));
        obj.insert("diagnostics".into(), jmap(&r.diagnostics));
        self.json.push(Value::Object(obj));
        if !r.pass {
            self.failed += 1;
        }
    }

    pub fn certificates() -> Self {
        Self::new(vec![
            "T",
            "U",
            "tau_target",
            "tau_hat",
            "residual",
            "tolerance",
            "anchor_kind",
            "anchor",
            "certified",
        ])
    }

    pub fn push_certificate(&mut self, c: &AasCandidate) {
        self.rows.push(vec![
            num(c.t_tilde),
            num(c.u_tilde),
            num(c.tau_target),
            num(c.tau_hat),
            num(c.residual),
            num(c.tolerance),
            c.anchor_kind.name().to_string(),
            num(c.anchor),
            c.certified.to_string(),
        ]);
        let mut obj = Map::new();
        obj.insert("T".into(), jnum(c.t_tilde));
        obj.insert("U".into(), jnum(c.u_tilde));
        obj.insert("tau_target".into(), jnum(c.tau_target));
        obj.insert("tau_hat".into(), jnum(c.tau_hat));
        obj.insert("residual".into(), jnum(c.residual));
        obj.insert("tolerance".into(), jnum(c.tolerance));
        obj.insert("anchor_kind".into(), Value::String(c.anchor_kind.name().into()));
        obj.insert("anchor".into(), jnum(c.anchor));
        obj.insert("certified".into(), Value::Bool(c.certified));
        self.json.push(Value::Object(obj));
        if !c.certified {
            self.failed += 1;
        }
    }

    pub fn csv_text(&self) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
    }

    pub fn jsonl_text(&self) -> CliResult<String> {
        let mut out = String::new();
        for v in &self.json {
            out.push_str(&serde_json::to_string(v)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn text(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Csv => self.csv_text(),
            Format::JsonLines => self.jsonl_text(),
        }
    }

    /// Writes to `out` (format from its extension), or CSV to stdout.
    pub fn emit(&self, out: Option<&Path>) -> CliResult<()> {
        match out {
            Some(path) => {
                let text = self.text(Format::for_path(path))?;
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
                }
                fs::write(path, text).map_err(|e| CliError::io(path, e))
            }
            None => {
                let text = self.csv_text()?;
                std::io::stdout()
                    .lock()
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::io("<stdout>", e))
            }
        }
    }
}
