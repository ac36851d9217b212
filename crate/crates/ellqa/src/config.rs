//! Run configuration: flat `key = value` files, flag overrides, validation.

use crate::context::{Ctx, MAX_CUTOFF};
use crate::error::{param, Error, Result};
use crate::report::RunParams;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Qseries,
    Structfuncs,
    Rmatrix,
    Bosonope,
    Evalrep,
    Identities,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Qseries, Suite::Structfuncs, Suite::Rmatrix, Suite::Bosonope, Suite::Evalrep, Suite::Identities];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Qseries => "qseries",
            Suite::Structfuncs => "structfuncs",
            Suite::Rmatrix => "rmatrix",
            Suite::Bosonope => "bosonope",
            Suite::Evalrep => "evalrep",
            Suite::Identities => "identities",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses one suite name; `all` expands to every suite.
pub fn parse_suites(s: &str) -> std::result::Result<Vec<Suite>, String> {
    let mut out = Vec::new();
    for part in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
        } else {
            match Suite::ALL.iter().find(|x| x.name() == part) {
                Some(x) => out.push(*x),
                None => return Err(format!("unknown suite `{part}` (expected one of {}, all)", suite_names())),
            }
        }
    }
    if out.is_empty() {
        return Err("empty suite list".into());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn suite_names() -> String {
    Suite::ALL.map(|s| s.name()).join(", ")
}

/// Validated configuration. Echoed verbatim at the top of every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub q: f64,
    pub r: f64,
    pub c: f64,
    /// Overrides every check's pinned tolerance when set.
    pub tol: Option<f64>,
    pub n_samples: usize,
    pub series_order: usize,
    /// Overrides the automatic product truncation when set.
    pub product_cutoff: Option<usize>,
    pub seed: u64,
    pub suites: Vec<Suite>,
}

impl SuiteConfig {
    pub fn ctx(&self) -> Result<Ctx> {
        let mut ctx = Ctx::build(self.q, self.r, self.c, 1e-10, self.series_order)?;
        if let Some(n) = self.product_cutoff {
            ctx.product_cutoff = n;
        }
        Ok(ctx)
    }

    pub fn run_params(&self) -> RunParams {
        RunParams { seed: self.seed, n_samples: self.n_samples, tol: self.tol, order: self.series_order }
    }
}

/// Where a raw value came from, so a range error can point at it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

/// Unvalidated key/value pairs from a file, flags, or both.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<&'static str, (String, Origin)>,
}

pub const KEYS: [&str; 9] = ["q", "r", "c", "tol", "samples", "order", "cutoff", "seed", "suite"];

fn canonical_key(k: &str) -> Option<&'static str> {
    let k = match k {
        "n_samples" => "samples",
        "series_order" => "order",
        "product_cutoff" => "cutoff",
        "suites" => "suite",
        other => other,
    };
    KEYS.iter().copied().find(|x| *x == k)
}

impl RawConfig {
    pub fn new() -> Self {
        RawConfig::default()
    }

    /// `key = value` per line; `#` starts a comment; blank lines ignored.
    pub fn parse(text: &str) -> Result<RawConfig> {
        let mut raw = RawConfig::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config { line: n, msg: format!("expected key = value, got `{line}`") })?;
            let (k, v) = (k.trim(), v.trim());
            let key = canonical_key(k).ok_or_else(|| Error::Config {
                line: n,
                msg: format!("unknown key `{k}` (expected one of {})", KEYS.join(", ")),
            })?;
            if v.is_empty() {
                return Err(Error::Config { line: n, msg: format!("empty value for `{key}`") });
            }
            if raw.values.contains_key(key) {
                return Err(Error::Config { line: n, msg: format!("duplicate key `{key}`") });
            }
            raw.values.insert(key, (v.to_string(), Origin::Line(n)));
        }
        Ok(raw)
    }

    pub fn from_file(path: &std::path::Path) -> Result<RawConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config { line: 0, msg: format!("cannot read {}: {e}", path.display()) })?;
        RawConfig::parse(&text)
    }

    /// Sets a value from a command-line flag; later calls win.
    pub fn set_flag(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let k = canonical_key(key).ok_or_else(|| param(key, "unknown option"))?;
        self.values.insert(k, (value.into(), Origin::Flag));
        Ok(())
    }

    /// `other` wins on every key it sets.
    pub fn overlay(mut self, other: RawConfig) -> RawConfig {
        self.values.extend(other.values);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    fn err(&self, key: &'static str, msg: String) -> Error {
        match self.values.get(key).map(|x| x.1) {
            Some(Origin::Line(line)) => Error::Config { line, msg: format!("`{key}`: {msg}") },
            _ => param(&format!("--{key}"), msg),
        }
    }

    fn num<T: FromStr>(&self, key: &'static str, default: Option<T>) -> Result<T> {
        match self.values.get(key) {
            Some((v, _)) => v.parse().map_err(|_| self.err(key, format!("cannot parse `{v}`"))),
            None => default.ok_or_else(|| param(&format!("--{key}"), "required")),
        }
    }

    fn opt_num<T: FromStr>(&self, key: &'static str) -> Result<Option<T>> {
        match self.values.get(key) {
            Some(_) => self.num(key, None).map(Some),
            None => Ok(None),
        }
    }

    /// Defaults: q = 0.5, r = 4, c = 1, samples = 100, order = 30, seed = 0, suite = all.
    pub fn validate(&self) -> Result<SuiteConfig> {
        let q: f64 = self.num("q", Some(0.5))?;
        let r: f64 = self.num("r", Some(4.0))?;
        let c: f64 = self.num("c", Some(1.0))?;
        let tol: Option<f64> = self.opt_num("tol")?;
        let n_samples: usize = self.num("samples", Some(100))?;
        let series_order: usize = self.num("order", Some(30))?;
        let product_cutoff: Option<usize> = self.opt_num("cutoff")?;
        let seed: u64 = self.num("seed", Some(0))?;
        let suites = match self.get("suite") {
            Some(s) => parse_suites(s).map_err(|m| self.err("suite", m))?,
            None => Suite::ALL.to_vec(),
        };

        if !(q > 0.0 && q < 1.0) {
            return Err(self.err("q", format!("need 0 < q < 1, got {q}")));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(self.err("c", format!("need c >= 0, got {c}")));
        }
        if !(r > c && r.is_finite()) {
            let key = if self.values.contains_key("r") { "r" } else { "c" };
            return Err(self.err(key, format!("need r > c, got r={r}, c={c}")));
        }
        if let Some(t) = tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(self.err("tol", format!("need tol > 0, got {t}")));
            }
        }
        if n_samples == 0 {
            return Err(self.err("samples", "need at least one sample".into()));
        }
        if series_order == 0 {
            return Err(self.err("order", "series order must be positive".into()));
        }
        if let Some(n) = product_cutoff {
            if n == 0 || n > MAX_CUTOFF {
                return Err(self.err("cutoff", format!("need 1 <= cutoff <= {MAX_CUTOFF}, got {n}")));
            }
        }
        let cfg = SuiteConfig { q, r, c, tol, n_samples, series_order, product_cutoff, seed, suites };
        cfg.ctx()?;
        Ok(cfg)
    }
}
