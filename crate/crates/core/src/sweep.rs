//! Driving-strength sweeps, time traces and critical-point search, plus their
//! CSV renderings.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::amplitude::AmplitudeSolution;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::measures::{self, EvolutionMetrics};
use crate::model::{ModelParams, TransitTime};
use crate::oracle::{solve_volterra, TimeSeries, VolterraConfig};

/// `qsl_ratio` below `1 - SPEEDUP_THRESHOLD` counts as a speedup.
pub const SPEEDUP_THRESHOLD: f64 = 1e-6;
/// Width of the final critical-point bracket, in units of gamma.
pub const CRITICAL_RESOLUTION: f64 = 1e-4;

pub const SWEEP_HEADER: [&str; 6] = [
    "omega_over_gamma",
    "qsl_ratio",
    "nm",
    "p_tau",
    "identity_residual",
    "status",
];

pub const TRACE_HEADER: [&str; 7] = [
    "t",
    "re_c1",
    "im_c1",
    "abs_c1_sq",
    "decoherence_rate",
    "lamb_shift",
    "status",
];

/// Uniform grid of `omega_drive / gamma` values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for OmegaGrid {
    fn default() -> Self {
        OmegaGrid {
            start: 0.0,
            stop: 30.0,
            count: 601,
        }
    }
}

impl OmegaGrid {
    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: String| Err(Error::InvalidParameter { field, reason });
        if self.count < 2 {
            return bad("omega_count", format!("must be >= 2, got {}", self.count));
        }
        if !(self.start >= 0.0 && self.start.is_finite()) {
            return bad("omega_start", format!("must be >= 0, got {}", self.start));
        }
        if !(self.stop > self.start && self.stop.is_finite()) {
            return bad(
                "omega_stop",
                format!("must exceed omega_start, got {}", self.stop),
            );
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub omega: OmegaGrid,
    pub beta_list: Vec<f64>,
    pub lambda_list: Vec<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.omega.validate()?;
        if self.lambda_list.is_empty() || self.beta_list.is_empty() {
            return Err(Error::InvalidParameter {
                field: "lambda",
                reason: "sweep needs at least one lambda and one beta".into(),
            });
        }
        for &l in &self.lambda_list {
            for &b in &self.beta_list {
                self.base.with_lambda(l).with_beta(b).validate()?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Skipped(String),
}

impl RowStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RowStatus::Ok)
    }
}

impl std::fmt::Display for RowStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowStatus::Ok => f.write_str("ok"),
            RowStatus::Skipped(reason) => write!(f, "skipped: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub omega_over_gamma: f64,
    pub qsl_ratio: f64,
    pub nm: f64,
    pub p_tau: f64,
    pub identity_residual: f64,
    pub status: RowStatus,
}

impl SweepRow {
    fn from_metrics(omega_over_gamma: f64, r: Result<EvolutionMetrics>) -> Self {
        match r {
            Ok(m) => SweepRow {
                omega_over_gamma,
                qsl_ratio: m.qsl_ratio,
                nm: m.nm,
                p_tau: m.p_tau,
                identity_residual: m.identity_residual,
                status: RowStatus::Ok,
            },
            Err(e) => SweepRow {
                omega_over_gamma,
                qsl_ratio: f64::NAN,
                nm: f64::NAN,
                p_tau: f64::NAN,
                identity_residual: f64::NAN,
                status: RowStatus::Skipped(e.to_string()),
            },
        }
    }
}

/// One `(lambda, beta)` curve of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub lambda: f64,
    pub beta: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepCurve {
    pub fn file_name(&self) -> String {
        format!(
            "sweep_lambda{}_beta{}.csv",
            format_label(self.lambda),
            format_label(self.beta)
        )
    }
}

/// Measures at a single driving strength (in units of gamma).
pub fn metrics_at(params: &ModelParams, omega_over_gamma: f64) -> Result<EvolutionMetrics> {
    let p = params.with_drive(omega_over_gamma * params.gamma);
    let sol = AmplitudeSolution::from_params(&p)?;
    measures::metrics(&sol, p.tau)
}

pub fn sweep_row(params: &ModelParams, omega_over_gamma: f64) -> SweepRow {
    SweepRow::from_metrics(omega_over_gamma, metrics_at(params, omega_over_gamma))
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Evaluate every `(lambda, beta, omega)` point in parallel. Curves come back
/// ordered by ascending `lambda`, then `beta`; rows by ascending `omega`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepCurve>> {
    spec.validate()?;
    let omegas = spec.omega.values();
    let curves: Vec<(f64, f64)> = sorted(&spec.lambda_list)
        .into_iter()
        .flat_map(|l| sorted(&spec.beta_list).into_iter().map(move |b| (l, b)))
        .collect();
    let jobs: Vec<(usize, f64)> = (0..curves.len())
        .flat_map(|c| omegas.iter().map(move |&o| (c, o)))
        .collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(c, o)| {
            let (l, b) = curves[c];
            sweep_row(&spec.base.with_lambda(l).with_beta(b), o)
        })
        .collect();
    let mut rows = rows.into_iter();
    Ok(curves
        .into_iter()
        .map(|(lambda, beta)| SweepCurve {
            lambda,
            beta,
            rows: rows.by_ref().take(omegas.len()).collect(),
        })
        .collect())
}

/// Serial reference implementation of [`run_sweep`].
pub fn run_sweep_serial(spec: &SweepSpec) -> Result<Vec<SweepCurve>> {
    spec.validate()?;
    let omegas = spec.omega.values();
    let mut out = Vec::new();
    for lambda in sorted(&spec.lambda_list) {
        for beta in sorted(&spec.beta_list) {
            let p = spec.base.with_lambda(lambda).with_beta(beta);
            out.push(SweepCurve {
                lambda,
                beta,
                rows: omegas.iter().map(|&o| sweep_row(&p, o)).collect(),
            });
        }
    }
    Ok(out)
}

fn check_trace_grid(horizon: f64, count: usize) -> Result<()> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "trace_horizon",
            reason: format!("must be > 0, got {horizon}"),
        });
    }
    if count < 2 {
        return Err(Error::InvalidParameter {
            field: "trace_count",
            reason: format!("must be >= 2, got {count}"),
        });
    }
    Ok(())
}

/// Closed-form time trace on `count` uniform samples of `[0, horizon]`.
pub fn run_trace(params: &ModelParams, horizon: f64, count: usize) -> Result<TimeSeries> {
    check_trace_grid(horizon, count)?;
    let sol = AmplitudeSolution::from_params(params)?;
    Ok(TimeSeries::from_solution(&sol, horizon, count))
}

/// Finite-cavity trace from the Volterra solver. The step is shrunk below
/// `max_step` until it divides the output spacing, so every output sample is
/// a solver node.
pub fn run_cavity_trace(
    params: &ModelParams,
    horizon: f64,
    count: usize,
    max_step: f64,
) -> Result<TimeSeries> {
    check_trace_grid(horizon, count)?;
    let kernel = Kernel::finite_cavity(params)?;
    let spacing = horizon / (count - 1) as f64;
    let per_sample = (spacing / max_step).ceil().max(1.0) as usize;
    let cfg = VolterraConfig::new(spacing / per_sample as f64, horizon);
    cfg.validate()?;
    let full = solve_volterra(&kernel, &cfg)?;
    debug_assert_eq!(full.len(), (count - 1) * per_sample + 1);
    let pick = |v: &[_]| -> Vec<_> { v.iter().step_by(per_sample).copied().collect() };
    Ok(TimeSeries {
        t: (0..count).map(|i| spacing * i as f64).collect(),
        c1: pick(&full.c1),
        c1_dot: pick(&full.c1_dot),
    })
}

/// Trace for any parameter set: closed form in the continuum limit, the
/// Volterra solver with the finite-cavity kernel otherwise.
pub fn trace_for(
    params: &ModelParams,
    horizon: f64,
    count: usize,
    oracle_step: f64,
) -> Result<TimeSeries> {
    match params.tau0 {
        TransitTime::Infinite => run_trace(params, horizon, count),
        TransitTime::Finite(_) => run_cavity_trace(params, horizon, count, oracle_step),
    }
}

pub fn trace_file_name(params: &ModelParams) -> String {
    format!(
        "trace_lambda{}_beta{}_omega{}.csv",
        format_label(params.lambda),
        format_label(params.beta),
        format_label(params.omega_drive / params.gamma)
    )
}

fn is_speedup(params: &ModelParams, omega_over_gamma: f64) -> Result<bool> {
    Ok(metrics_at(params, omega_over_gamma)?.qsl_ratio < 1.0 - SPEEDUP_THRESHOLD)
}

/// Bisect the onset of speedup inside `bracket` (in units of gamma) down to
/// [`CRITICAL_RESOLUTION`]. The bracket must start without speedup and end
/// with it.
pub fn find_critical_omega(params: &ModelParams, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    let invalid = |reason: &str| Error::BracketInvalid {
        lo: bracket.0,
        hi: bracket.1,
        reason: reason.to_string(),
    };
    if !(lo < hi) {
        return Err(invalid("empty bracket"));
    }
    if is_speedup(params, lo)? {
        return Err(invalid("already sped up at the lower end"));
    }
    if !is_speedup(params, hi)? {
        return Err(invalid("no speedup at the upper end"));
    }
    while hi - lo > CRITICAL_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if is_speedup(params, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First speedup transition along `grid`, refined by bisection.
pub fn locate_critical_omega(params: &ModelParams, grid: &OmegaGrid) -> Result<f64> {
    grid.validate()?;
    let mut prev = grid.value(0);
    if is_speedup(params, prev)? {
        return Err(Error::BracketInvalid {
            lo: grid.start,
            hi: grid.stop,
            reason: "already sped up at the start of the grid".into(),
        });
    }
    for i in 1..grid.count {
        let o = grid.value(i);
        if is_speedup(params, o)? {
            return find_critical_omega(params, (prev, o));
        }
        prev = o;
    }
    Err(Error::BracketInvalid {
        lo: grid.start,
        hi: grid.stop,
        reason: "no speedup anywhere on the grid".into(),
    })
}

/// Compact, filesystem-safe rendering of a parameter value for file names.
pub fn format_label(v: f64) -> String {
    if v == 0.0 || (1e-3..1e6).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Fixed 17-significant-digit rendering used in every CSV cell.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            format_value(r.omega_over_gamma),
            format_value(r.qsl_ratio),
            format_value(r.nm),
            format_value(r.p_tau),
            format_value(r.identity_residual),
            r.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_csv<W: Write>(out: W, series: &TimeSeries) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for i in 0..series.len() {
        let c = series.c1[i];
        let (rate, shift, status) = match series.rates(i) {
            Ok(r) => (r.gamma, r.lamb_shift, RowStatus::Ok),
            Err(e) => (f64::NAN, f64::NAN, RowStatus::Skipped(e.to_string())),
        };
        w.write_record([
            format_value(series.t[i]),
            format_value(c.re),
            format_value(c.im),
            format_value(c.norm_sqr()),
            format_value(rate),
            format_value(shift),
            status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Write one CSV per curve into `dir`, returning the paths in curve order.
pub fn write_sweep_files(dir: &Path, curves: &[SweepCurve]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    curves
        .iter()
        .map(|c| {
            let path = dir.join(c.file_name());
            let file = std::fs::File::create(&path)?;
            write_sweep_csv(std::io::BufWriter::new(file), &c.rows)?;
            Ok(path)
        })
        .collect()
}
