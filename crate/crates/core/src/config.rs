//! Flat `key = value` run configuration.
//!
//! ```text
//! # strong coupling, moving qubit
//! lambda = 0.01, 0.05
//! beta = 0, 1e-9
//! omega_stop = 20
//! tau0 = infinite
//! ```
//!
//! `lambda` and `beta` accept comma-separated lists; every other key takes a
//! single value. Unknown or repeated keys are errors.

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{ModelParams, TransitTime};
use crate::sweep::{OmegaGrid, SweepSpec};

pub const KEYS: [&str; 14] = [
    "omega0",
    "gamma",
    "lambda",
    "omega_drive",
    "delta",
    "beta",
    "tau0",
    "tau",
    "omega_start",
    "omega_stop",
    "omega_count",
    "trace_horizon",
    "trace_count",
    "oracle_step",
];

pub const DEFAULT_WEAK_LAMBDAS: [f64; 3] = [3.0, 5.0, 10.0];
pub const DEFAULT_STRONG_LAMBDAS: [f64; 3] = [0.01, 0.05, 0.1];
pub const DEFAULT_BETAS: [f64; 4] = [0.0, 5e-10, 1e-9, 1.5e-9];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Base parameters; `lambda` and `beta` hold the first list entries.
    pub params: ModelParams,
    pub lambdas: Vec<f64>,
    pub betas: Vec<f64>,
    pub omega: OmegaGrid,
    pub trace_horizon: f64,
    pub trace_count: usize,
    pub oracle_step: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let lambdas: Vec<f64> = DEFAULT_WEAK_LAMBDAS
            .iter()
            .chain(&DEFAULT_STRONG_LAMBDAS)
            .copied()
            .collect();
        let betas = DEFAULT_BETAS.to_vec();
        RunConfig {
            params: ModelParams::default()
                .with_lambda(lambdas[0])
                .with_beta(betas[0]),
            lambdas,
            betas,
            omega: OmegaGrid::default(),
            trace_horizon: 10.0,
            trace_count: 1001,
            oracle_step: 1e-3,
        }
    }
}

fn parse_f64(key: &str, raw: &str) -> std::result::Result<f64, String> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| format!("`{key}` expects a number, got `{}`", raw.trim()))
}

fn parse_list(key: &str, raw: &str) -> std::result::Result<Vec<f64>, String> {
    let values = raw
        .split(',')
        .map(|v| parse_f64(key, v))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(format!("`{key}` needs at least one value"));
    }
    Ok(values)
}

fn parse_count(key: &str, raw: &str) -> std::result::Result<usize, String> {
    raw.trim().parse::<usize>().map_err(|_| {
        format!(
            "`{key}` expects a non-negative integer, got `{}`",
            raw.trim()
        )
    })
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                reason: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            if seen.iter().any(|k| k == key) {
                return Err(Error::Config {
                    line,
                    reason: format!("duplicate key `{key}`"),
                });
            }
            cfg.set_at(line, key, value)?;
            seen.push(key.to_string());
        }
        Ok(cfg)
    }

    /// Apply one override (e.g. from a command-line flag).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        self.set_at(0, key, value)
    }

    fn set_at(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        let err = |reason: String| Error::Config { line, reason };
        let p = &mut self.params;
        match key {
            "omega0" => p.omega0 = parse_f64(key, value).map_err(err)?,
            "gamma" => p.gamma = parse_f64(key, value).map_err(err)?,
            "omega_drive" => p.omega_drive = parse_f64(key, value).map_err(err)?,
            "delta" => p.delta = parse_f64(key, value).map_err(err)?,
            "tau" => p.tau = parse_f64(key, value).map_err(err)?,
            "tau0" => {
                p.tau0 = match value.trim().to_ascii_lowercase().as_str() {
                    "inf" | "infinite" | "infinity" => TransitTime::Infinite,
                    _ => TransitTime::Finite(parse_f64(key, value).map_err(err)?),
                }
            }
            "lambda" => {
                self.lambdas = parse_list(key, value).map_err(err)?;
                p.lambda = self.lambdas[0];
            }
            "beta" => {
                self.betas = parse_list(key, value).map_err(err)?;
                p.beta = self.betas[0];
            }
            "omega_start" => self.omega.start = parse_f64(key, value).map_err(err)?,
            "omega_stop" => self.omega.stop = parse_f64(key, value).map_err(err)?,
            "omega_count" => self.omega.count = parse_count(key, value).map_err(err)?,
            "trace_horizon" => self.trace_horizon = parse_f64(key, value).map_err(err)?,
            "trace_count" => self.trace_count = parse_count(key, value).map_err(err)?,
            "oracle_step" => self.oracle_step = parse_f64(key, value).map_err(err)?,
            other => return Err(err(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Validate everything a run could touch.
    pub fn validate(&self) -> Result<()> {
        for &lambda in &self.lambdas {
            for &beta in &self.betas {
                self.params.with_lambda(lambda).with_beta(beta).validate()?;
            }
        }
        self.omega.validate()?;
        if !(self.trace_horizon > 0.0 && self.trace_horizon.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "trace_horizon",
                reason: format!("must be > 0, got {}", self.trace_horizon),
            });
        }
        if self.trace_count < 2 {
            return Err(Error::InvalidParameter {
                field: "trace_count",
                reason: format!("must be >= 2, got {}", self.trace_count),
            });
        }
        if !(self.oracle_step > 0.0 && self.oracle_step.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "oracle_step",
                reason: format!("must be > 0, got {}", self.oracle_step),
            });
        }
        Ok(())
    }

    /// Every `(lambda, beta)` parameter set, in list order.
    pub fn parameter_sets(&self) -> Vec<ModelParams> {
        self.lambdas
            .iter()
            .flat_map(|&l| self.betas.iter().map(move |&b| (l, b)))
            .map(|(l, b)| self.params.with_lambda(l).with_beta(b))
            .collect()
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            base: self.params,
            omega: self.omega,
            beta_list: self.betas.clone(),
            lambda_list: self.lambdas.clone(),
        }
    }
}
