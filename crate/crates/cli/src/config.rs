use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use uniaxial_core::SolverConfig;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("unknown format '{s}' (csv | json)"))),
        }
    }
}

/// Flags shared by every subcommand; each may also come from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Number of spins (comma-separated list accepted)
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,

    /// Reduced coupling α = 4g/δ (comma-separated list accepted)
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Option<Vec<f64>>,

    /// Transverse field δ [default: 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,

    /// Longitudinal field ε [default: 0]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,

    /// Adiabaticity ratio D = δ/ω (dicke commands only)
    #[arg(long = "d-ratio", global = true, allow_negative_numbers = true)]
    pub d_ratio: Option<f64>,

    #[arg(long, global = true)]
    pub nmin: Option<usize>,

    #[arg(long, global = true)]
    pub nmax: Option<usize>,

    /// Number of log-spaced grid points between nmin and nmax (powers of two if absent)
    #[arg(long, global = true)]
    pub ngrid: Option<usize>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file (directory for `figures` without --fig); stdout if absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Eigensolver residual tolerance (relative to the matrix norm)
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Worker threads for sweeps
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Flat key=value file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("bad value '{v}' for '{key}'")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').map(|s| parse(key, s.trim())).collect()
}

impl GlobalArgs {
    /// Fills unset fields from a `key = value` file. Blank lines and `#`
    /// comments are skipped; keys are flag names with `-` or `_`.
    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.merge_str(&text)
    }

    pub fn merge_str(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().replace('_', "-");
            let v = value.trim();
            match key.as_str() {
                "n" => fill(&mut self.n, || parse_list(&key, v))?,
                "alpha" => fill(&mut self.alpha, || parse_list(&key, v))?,
                "delta" => fill(&mut self.delta, || parse(&key, v))?,
                "epsilon" => fill(&mut self.epsilon, || parse(&key, v))?,
                "d-ratio" => fill(&mut self.d_ratio, || parse(&key, v))?,
                "nmin" => fill(&mut self.nmin, || parse(&key, v))?,
                "nmax" => fill(&mut self.nmax, || parse(&key, v))?,
                "ngrid" => fill(&mut self.ngrid, || parse(&key, v))?,
                "format" => fill(&mut self.format, || v.parse())?,
                "out" => fill(&mut self.out, || Ok(PathBuf::from(v)))?,
                "tol" => fill(&mut self.tol, || parse(&key, v))?,
                "workers" => fill(&mut self.workers, || parse(&key, v))?,
                _ => {
                    return Err(CliError::Config(format!(
                        "config line {}: unknown key '{key}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }
}

fn fill<T>(slot: &mut Option<T>, value: impl FnOnce() -> Result<T, CliError>) -> Result<(), CliError> {
    let v = value()?;
    if slot.is_none() {
        *slot = Some(v);
    }
    Ok(())
}

/// Which optional inputs a command accepts.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accepts {
    pub d_ratio: bool,
    pub epsilon: bool,
}

/// Validated run configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub n: Option<Vec<usize>>,
    pub alpha: Option<Vec<f64>>,
    pub delta: f64,
    pub epsilon: f64,
    pub d_ratio: Option<f64>,
    pub nmin: Option<usize>,
    pub nmax: Option<usize>,
    pub ngrid: Option<usize>,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub solver: SolverConfig,
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn resolve(mut args: GlobalArgs, accepts: Accepts) -> Result<Self, CliError> {
        if let Some(path) = args.config.clone() {
            args.merge_file(&path)?;
        }
        let mut solver = SolverConfig::default();
        if let Some(tol) = args.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::Config(format!("--tol must be positive, got {tol}")));
            }
            solver.tolerance = tol;
        }
        let cfg = RunConfig {
            n: args.n,
            alpha: args.alpha,
            delta: args.delta.unwrap_or(1.0),
            epsilon: args.epsilon.unwrap_or(0.0),
            d_ratio: args.d_ratio,
            nmin: args.nmin,
            nmax: args.nmax,
            ngrid: args.ngrid,
            format: args.format.unwrap_or_default(),
            out: args.out,
            solver,
            workers: args.workers,
        };
        cfg.validate(accepts)?;
        Ok(cfg)
    }

    fn validate(&self, accepts: Accepts) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return bad(format!("--delta must be positive, got {}", self.delta));
        }
        if !self.epsilon.is_finite() {
            return bad("--epsilon must be finite".into());
        }
        if self.epsilon != 0.0 && !accepts.epsilon {
            return bad("this command is defined at epsilon = 0".into());
        }
        if let Some(ns) = &self.n {
            if ns.is_empty() || ns.contains(&0) {
                return bad("--n values must be at least 1".into());
            }
        }
        if let Some(a) = &self.alpha {
            if a.is_empty() || a.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                return bad("--alpha values must be finite and non-negative".into());
            }
        }
        match self.d_ratio {
            Some(_) if !accepts.d_ratio => {
                return bad("--d-ratio only applies to dicke commands".into());
            }
            Some(d) if !(d.is_finite() && d > 0.0) => {
                return bad(format!("--d-ratio must be positive, got {d}"));
            }
            _ => {}
        }
        if let (Some(a), Some(b)) = (self.nmin, self.nmax) {
            if a == 0 || b < a {
                return bad(format!("invalid N range [{a}, {b}]"));
            }
        }
        if self.workers == Some(0) {
            return bad("--workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn parameters_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }

    pub fn single_alpha(&self, default: f64) -> Result<f64, CliError> {
        match self.alpha.as_deref() {
            None => Ok(default),
            Some([a]) => Ok(*a),
            Some(_) => Err(CliError::Config("this command takes a single --alpha".into())),
        }
    }

    pub fn single_n(&self, default: usize) -> Result<usize, CliError> {
        match self.n.as_deref() {
            None => Ok(default),
            Some([n]) => Ok(*n),
            Some(_) => Err(CliError::Config("this command takes a single --n".into())),
        }
    }
}
