//! Cross-module self-checks run by `qslmq verify`.
//!
//! Each check measures a residual and compares it with a fixed threshold.
//! The fast level finishes in a few seconds; the full level adds the complete
//! oracle grid, convergence orders and the finite-cavity comparison.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amplitude::AmplitudeSolution;
use crate::error::Error;
use crate::kernel::Kernel;
use crate::measures;
use crate::model::{ModelParams, TransitTime};
use crate::oracle::{self, VolterraConfig};
use crate::sweep::{self, OmegaGrid, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Fast,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<32} measured {:.3e} (threshold {:.1e}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn at_most(name: &str, measured: f64, threshold: f64, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: measured <= threshold,
        measured,
        threshold,
        detail,
    }
}

fn failure(name: &str, threshold: f64, err: Error) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: false,
        measured: f64::NAN,
        threshold,
        detail: err.to_string(),
    }
}

fn base() -> ModelParams {
    ModelParams::default()
}

/// Random parameter set from the acceptance distribution.
pub fn random_params(rng: &mut impl Rng) -> ModelParams {
    let lambda = (rng.gen_range(0.005f64.ln()..10f64.ln())).exp();
    base()
        .with_lambda(lambda)
        .with_drive(rng.gen_range(0.0..30.0))
        .with_beta(rng.gen_range(0.0..2e-9))
        .with_delta(rng.gen_range(-5.0..5.0))
}

/// Normalised worst residual over the three residue sum rules.
pub fn sum_rule_residual(sol: &AmplitudeSolution) -> f64 {
    let smax = sol.max_root_norm();
    let m0: Complex64 = sol.residues.iter().sum();
    let m1: Complex64 = sol
        .residues
        .iter()
        .zip(&sol.roots)
        .map(|(a, s)| a * s)
        .sum();
    let m2: Complex64 = sol
        .residues
        .iter()
        .zip(&sol.roots)
        .map(|(a, s)| a * s * s)
        .sum();
    let g4 = sol.gamma_lambda / 4.0;
    let r0 = (m0 - 1.0).norm() / 1e-10;
    let r1 = m1.norm() / (1e-8 * smax.max(f64::MIN_POSITIVE));
    let r2 = (m2 + g4).norm() / (1e-8 * (g4 + smax * smax));
    r0.max(r1).max(r2)
}

fn check_sum_rules(samples: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let p = random_params(&mut rng);
        match AmplitudeSolution::from_params(&p) {
            Ok(sol) => worst = worst.max(sum_rule_residual(&sol)),
            Err(e) => return failure("sum rules", 1.0, e),
        }
    }
    at_most(
        "sum rules",
        worst,
        1.0,
        format!("{samples} random sets, residual / tolerance"),
    )
}

/// Undriven static qubit against `e^{-lt/2}[cosh(Dt/2) + (l/D) sinh(Dt/2)]`.
pub fn closed_form_limit(lambda: f64, gamma: f64, t: f64) -> Complex64 {
    let d = Complex64::new(lambda * lambda - gamma * lambda, 0.0).sqrt();
    let x = d * t / 2.0;
    (-lambda * t / 2.0).exp() * (x.cosh() + (lambda / d) * x.sinh())
}

fn check_closed_form() -> CheckResult {
    let mut worst: f64 = 0.0;
    for lambda in [3.0, 0.01] {
        let sol = match AmplitudeSolution::from_params(&base().with_lambda(lambda)) {
            Ok(s) => s,
            Err(e) => return failure("closed-form limit", 1e-10, e),
        };
        for i in 0..=1000 {
            let t = i as f64 * 0.01;
            worst = worst.max((sol.c1_at(t) - closed_form_limit(lambda, 1.0, t)).norm());
        }
    }
    at_most("closed-form limit", worst, 1e-10, "t in [0, 10]".into())
}

/// The six oracle-comparison parameter sets.
pub fn oracle_sets() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for lambda in [3.0, 0.01] {
        for (omega, beta) in [(0.0, 0.0), (5.0, 0.0), (5.0, 1e-9)] {
            out.push(base().with_lambda(lambda).with_drive(omega).with_beta(beta));
        }
    }
    out
}

pub fn oracle_deviation(p: &ModelParams, step: f64, horizon: f64) -> crate::Result<f64> {
    let sol = AmplitudeSolution::from_params(p)?;
    let ts = oracle::solve_volterra(&Kernel::continuum(p)?, &VolterraConfig::new(step, horizon))?;
    Ok(ts.max_deviation(|t| sol.c1_at(t)))
}

fn check_oracle(sets: &[ModelParams]) -> CheckResult {
    let mut worst: f64 = 0.0;
    for p in sets {
        match oracle_deviation(p, 1e-3, 1.0) {
            Ok(d) => worst = worst.max(d),
            Err(e) => return failure("oracle equivalence", 1e-6, e),
        }
    }
    at_most(
        "oracle equivalence",
        worst,
        1e-6,
        format!("{} sets, h = 1e-3", sets.len()),
    )
}

fn check_order(sets: &[ModelParams], step: f64) -> CheckResult {
    let mut lowest = f64::INFINITY;
    for p in sets {
        let k = match Kernel::continuum(p) {
            Ok(k) => k,
            Err(e) => return failure("convergence order", 1.8, e),
        };
        match oracle::convergence_order(&k, &VolterraConfig::new(step, 1.0)) {
            Ok(oracle::ConvergenceOrder::Measured(o)) => lowest = lowest.min(o),
            Ok(oracle::ConvergenceOrder::Exact) => {}
            Err(e) => return failure("convergence order", 1.8, e),
        }
    }
    CheckResult {
        name: "convergence order".into(),
        passed: lowest >= 1.8,
        measured: lowest,
        threshold: 1.8,
        detail: format!("minimum over {} sets, h = {step:e}", sets.len()),
    }
}

fn check_identity(grid: OmegaGrid) -> CheckResult {
    let spec = SweepSpec {
        base: base(),
        omega: grid,
        beta_list: vec![0.0, 1e-9],
        lambda_list: vec![3.0, 0.01],
    };
    let curves = match sweep::run_sweep(&spec) {
        Ok(c) => c,
        Err(e) => return failure("qsl/memory identity", 1e-9, e),
    };
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for r in curves.iter().flat_map(|c| &c.rows) {
        if !r.status.is_ok() {
            skipped += 1;
            continue;
        }
        if 1.0 - r.p_tau > 1e-9 {
            worst = worst.max(r.identity_residual);
        }
    }
    let mut c = at_most(
        "qsl/memory identity",
        worst,
        1e-9,
        format!("{} omega points x 4 curves", grid.count),
    );
    if skipped > 0 {
        c.passed = false;
        c.detail.push_str(&format!(", {skipped} rows skipped"));
    }
    c
}

fn check_decoupled() -> CheckResult {
    let p = base().with_gamma(0.0).with_drive(5.0).with_beta(1e-9);
    let outcome = AmplitudeSolution::from_params(&p).and_then(|s| measures::metrics(&s, 1.0));
    let passed = matches!(outcome, Err(Error::NoEvolution { .. }));
    CheckResult {
        name: "decoupled qubit".into(),
        passed,
        measured: 0.0,
        threshold: 0.0,
        detail: match outcome {
            Err(e) => format!("expected error: {e}"),
            Ok(m) => format!("unexpected metrics {m:?}"),
        },
    }
}

fn check_finite_cavity() -> CheckResult {
    let lambda = 3.0;
    let p = base()
        .with_lambda(lambda)
        .with_drive(5.0)
        .with_tau0(TransitTime::Finite(50.0 / lambda));
    let cfg = VolterraConfig::new(1e-3, 1.0);
    let run = || -> crate::Result<f64> {
        let finite = oracle::solve_volterra(&Kernel::finite_cavity(&p)?, &cfg)?;
        let cont = oracle::solve_volterra(&Kernel::continuum(&p)?, &cfg)?;
        Ok(finite
            .c1
            .iter()
            .zip(&cont.c1)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    };
    match run() {
        Ok(d) => at_most(
            "finite cavity vs continuum",
            d,
            1e-6,
            "lambda tau0 = 50".into(),
        ),
        Err(e) => failure("finite cavity vs continuum", 1e-6, e),
    }
}

pub fn run_verify(level: VerifyLevel) -> VerifyReport {
    let sets = oracle_sets();
    let checks = match level {
        VerifyLevel::Fast => vec![
            check_sum_rules(50),
            check_closed_form(),
            check_oracle(&[sets[1], sets[5]]),
            check_order(&[sets[2]], 1e-2),
            check_identity(OmegaGrid {
                start: 0.0,
                stop: 30.0,
                count: 61,
            }),
            check_decoupled(),
        ],
        VerifyLevel::Full => vec![
            check_sum_rules(200),
            check_closed_form(),
            check_oracle(&sets),
            check_order(&sets, 1e-3),
            check_identity(OmegaGrid::default()),
            check_decoupled(),
            check_finite_cavity(),
        ],
    };
    VerifyReport { checks }
}
