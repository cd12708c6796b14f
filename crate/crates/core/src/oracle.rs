//! Direct time stepping of `dC1/dt = -∫_0^t F(t, t1) C1(t1) dt1`, `C1(0) = 1`,
//! for any memory kernel.
//!
//! The memory integral is a trapezoid sum over the stored history
//! (product integration), and each step is an explicit predictor followed by
//! a trapezoidal corrector. The scheme is second order and works unchanged
//! for kernels that are not functions of the lag, such as the finite-cavity
//! kernel. Cost is O(N^2) kernel evaluations and O(N) memory.

use num_complex::Complex64;

use crate::amplitude::{AmplitudeSolution, Rates, AMPLITUDE_FLOOR};
use crate::error::{Error, Result};
use crate::kernel::MemoryKernel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    TrapezoidalPredictorCorrector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolterraConfig {
    pub step: f64,
    pub horizon: f64,
    pub scheme: Scheme,
}

impl Default for VolterraConfig {
    fn default() -> Self {
        VolterraConfig {
            step: 1e-3,
            horizon: 1.0,
            scheme: Scheme::TrapezoidalPredictorCorrector,
        }
    }
}

impl VolterraConfig {
    pub fn new(step: f64, horizon: f64) -> Self {
        VolterraConfig {
            step,
            horizon,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "oracle_step",
                reason: format!("must be > 0, got {}", self.step),
            });
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "horizon",
                reason: format!("must be > 0, got {}", self.horizon),
            });
        }
        if self.step > self.horizon {
            return Err(Error::InvalidParameter {
                field: "oracle_step",
                reason: format!("step {} exceeds horizon {}", self.step, self.horizon),
            });
        }
        Ok(())
    }

    /// Number of steps; the effective step is `horizon / steps()`.
    pub fn steps(&self) -> usize {
        (self.horizon / self.step).round().max(1.0) as usize
    }

    /// Whether the step resolves the fastest exponential of `sol`
    /// (`step * max|s_k| <= 0.1`).
    pub fn resolves(&self, sol: &AmplitudeSolution) -> bool {
        self.step * sol.max_root_norm() <= 0.1
    }
}

/// Uniformly sampled amplitude with its derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub c1: Vec<Complex64>,
    pub c1_dot: Vec<Complex64>,
}

impl TimeSeries {
    /// Sample the closed-form amplitude on `count` points of `[0, horizon]`.
    pub fn from_solution(sol: &AmplitudeSolution, horizon: f64, count: usize) -> Self {
        let count = count.max(2);
        let t: Vec<f64> = (0..count)
            .map(|i| horizon * i as f64 / (count - 1) as f64)
            .collect();
        let (c1, c1_dot) = t.iter().map(|&ti| sol.c1_and_dot(ti)).unzip();
        TimeSeries { t, c1, c1_dot }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn population(&self, i: usize) -> f64 {
        self.c1[i].norm_sqr()
    }

    /// Trace distance of the optimal initial pair, equal to the population.
    pub fn trace_distance(&self, i: usize) -> f64 {
        self.population(i)
    }

    pub fn rates(&self, i: usize) -> Result<Rates> {
        let c = self.c1[i];
        let magnitude = c.norm();
        if magnitude < AMPLITUDE_FLOOR {
            return Err(Error::AmplitudeZero {
                t: self.t[i],
                magnitude,
            });
        }
        let r = self.c1_dot[i] / c;
        Ok(Rates {
            gamma: -2.0 * r.re,
            lamb_shift: -2.0 * r.im,
        })
    }

    /// Largest `|C1 - other|` over samples shared with `other`.
    pub fn max_deviation<F: Fn(f64) -> Complex64>(&self, other: F) -> f64 {
        self.t
            .iter()
            .zip(&self.c1)
            .map(|(&t, &c)| (c - other(t)).norm())
            .fold(0.0, f64::max)
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: Complex64,
    carry: Complex64,
}

impl Compensated {
    fn new(v: Complex64) -> Self {
        Compensated {
            sum: v,
            carry: Complex64::new(0.0, 0.0),
        }
    }

    fn add(&mut self, v: Complex64) {
        let re = two_sum(self.sum.re, v.re);
        let im = two_sum(self.sum.im, v.im);
        self.sum = Complex64::new(re.0, im.0);
        self.carry += Complex64::new(re.1, im.1);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = if a.abs() >= b.abs() {
        (a - s) + b
    } else {
        (b - s) + a
    };
    (s, err)
}

const MAX_CORRECTOR_ITERS: usize = 50;

pub fn solve_volterra<K: MemoryKernel + ?Sized>(
    kernel: &K,
    cfg: &VolterraConfig,
) -> Result<TimeSeries> {
    cfg.validate()?;
    let n = cfg.steps();
    let h = cfg.horizon / n as f64;
    let time = |i: usize| cfg.horizon * i as f64 / n as f64;

    let mut t = Vec::with_capacity(n + 1);
    let mut c1 = Vec::with_capacity(n + 1);
    let mut c1_dot = Vec::with_capacity(n + 1);
    t.push(0.0);
    c1.push(Complex64::new(1.0, 0.0));
    c1_dot.push(Complex64::new(0.0, 0.0));

    // running amplitude, accumulated with compensation
    let mut amp = Compensated::new(Complex64::new(1.0, 0.0));
    let mut row = Vec::with_capacity(n + 1);

    for step in 0..n {
        let t_next = time(step + 1);
        row.clear();
        row.extend((0..=step + 1).map(|j| kernel.eval(t_next, time(j))));

        // trapezoid over known history: h [F_0 C_0 / 2 + sum_{0<j<=step} F_j C_j]
        let mut hist = Compensated::new(0.5 * row[0] * c1[0]);
        for j in 1..=step {
            hist.add(row[j] * c1[j]);
        }
        let known = h * hist.value();
        let diag = row[step + 1];

        let memory_now = -c1_dot[step]; // ∫_0^{t_n} F(t_n, .) C1
        let c_now = amp.value();

        // predictor: explicit Euler on the current memory
        let mut incr = -h * memory_now;
        // corrector: trapezoid in time, unknown enters through the diagonal
        let mut prev_change = f64::INFINITY;
        let mut growth = 0;
        let mut converged = false;
        for _ in 0..MAX_CORRECTOR_ITERS {
            let memory_next = known + 0.5 * h * diag * (c_now + incr);
            let next = -0.5 * h * (memory_now + memory_next);
            let change = (next - incr).norm();
            incr = next;
            if change <= 4.0 * f64::EPSILON * (incr.norm() + f64::MIN_POSITIVE) {
                converged = true;
                break;
            }
            if change >= prev_change {
                growth += 1;
                if growth >= 5 {
                    return Err(Error::StepTooLarge { step });
                }
            } else {
                growth = 0;
            }
            prev_change = change;
        }
        if !converged && !(incr.re.is_finite() && incr.im.is_finite()) {
            return Err(Error::StepTooLarge { step });
        }

        amp.add(incr);
        let c_next = amp.value();
        let memory_next = known + 0.5 * h * diag * c_next;
        t.push(t_next);
        c1.push(c_next);
        c1_dot.push(-memory_next);
    }

    Ok(TimeSeries { t, c1, c1_dot })
}

/// Empirical order of the scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceOrder {
    /// Successive refinements agree exactly (e.g. a vanishing kernel).
    Exact,
    Measured(f64),
}

impl ConvergenceOrder {
    pub fn at_least(&self, order: f64) -> bool {
        match *self {
            ConvergenceOrder::Exact => true,
            ConvergenceOrder::Measured(p) => p >= order,
        }
    }
}

/// Runs at `h`, `h/2`, `h/4` and returns `log2(|C_h - C_{h/2}| / |C_{h/2} - C_{h/4}|)`
/// in the max norm over the coarse grid.
pub fn convergence_order<K: MemoryKernel + ?Sized>(
    kernel: &K,
    cfg: &VolterraConfig,
) -> Result<ConvergenceOrder> {
    let coarse = solve_volterra(kernel, cfg)?;
    let mid = solve_volterra(
        kernel,
        &VolterraConfig {
            step: cfg.step / 2.0,
            ..*cfg
        },
    )?;
    let fine = solve_volterra(
        kernel,
        &VolterraConfig {
            step: cfg.step / 4.0,
            ..*cfg
        },
    )?;
    let mut e1: f64 = 0.0;
    let mut e2: f64 = 0.0;
    for i in 0..coarse.len() {
        let a = coarse.c1[i];
        let b = mid.c1[2 * i];
        let c = fine.c1[4 * i];
        e1 = e1.max((a - b).norm());
        e2 = e2.max((b - c).norm());
    }
    if e1 == 0.0 && e2 == 0.0 {
        return Ok(ConvergenceOrder::Exact);
    }
    Ok(ConvergenceOrder::Measured((e1 / e2).log2()))
}
