//! Physical parameters of the driven moving qubit and the quantities derived
//! from them.
//!
//! Frequencies are in units of the decay rate `gamma` and times in units of
//! `1/gamma`. The dressed-basis reduction of the driven Hamiltonian is taken
//! as its end result: the reservoir sees a dressed transition detuned from the
//! cavity centre by `omega_d - delta`, and the qubit motion Doppler-splits the
//! kernel through `mu * beta`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Cavity transit time `l / c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransitTime {
    Finite(f64),
    /// Continuum limit, the cavity is infinitely long.
    Infinite,
}

impl TransitTime {
    pub fn is_infinite(&self) -> bool {
        matches!(self, TransitTime::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            TransitTime::Finite(v) => Some(v),
            TransitTime::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Qubit transition frequency.
    pub omega0: f64,
    /// Excited-state decay rate. `0` decouples the qubit from the reservoir.
    pub gamma: f64,
    /// Spectral width of the Lorentzian reservoir.
    pub lambda: f64,
    /// Classical driving strength.
    pub omega_drive: f64,
    /// Detuning between qubit and driving field, `omega0 - omega_f`.
    pub delta: f64,
    /// Velocity ratio `v / c`.
    pub beta: f64,
    pub tau0: TransitTime,
    /// Standard evolution time used by the speed-limit and memory measures.
    pub tau: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            omega0: 1.53e9,
            gamma: 1.0,
            lambda: 3.0,
            omega_drive: 0.0,
            delta: 0.0,
            beta: 0.0,
            tau0: TransitTime::Infinite,
            tau: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Weak,
    Strong,
    /// `lambda == 2 gamma`; handled like `Weak` downstream.
    Boundary,
}

impl ModelParams {
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_drive(mut self, omega_drive: f64) -> Self {
        self.omega_drive = omega_drive;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_tau0(mut self, tau0: TransitTime) -> Self {
        self.tau0 = tau0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        fn bad(field: &'static str, reason: impl Into<String>) -> Error {
            Error::InvalidParameter {
                field,
                reason: reason.into(),
            }
        }
        let finite = [
            ("omega0", self.omega0),
            ("gamma", self.gamma),
            ("lambda", self.lambda),
            ("omega_drive", self.omega_drive),
            ("delta", self.delta),
            ("beta", self.beta),
            ("tau", self.tau),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(bad(name, format!("must be finite, got {v}")));
            }
        }
        if self.omega0 <= 0.0 {
            return Err(bad("omega0", format!("must be > 0, got {}", self.omega0)));
        }
        if self.gamma < 0.0 {
            return Err(bad("gamma", format!("must be >= 0, got {}", self.gamma)));
        }
        if self.lambda <= 0.0 {
            return Err(bad("lambda", format!("must be > 0, got {}", self.lambda)));
        }
        if self.omega_drive < 0.0 {
            return Err(bad(
                "omega_drive",
                format!("must be >= 0, got {}", self.omega_drive),
            ));
        }
        if !(0.0..1.0).contains(&self.beta) {
            return Err(bad(
                "beta",
                format!("must lie in [0, 1), got {}", self.beta),
            ));
        }
        if self.tau <= 0.0 {
            return Err(bad("tau", format!("must be > 0, got {}", self.tau)));
        }
        if let TransitTime::Finite(t0) = self.tau0 {
            if !(t0.is_finite() && t0 > 0.0) {
                return Err(bad("tau0", format!("must be > 0 or infinite, got {t0}")));
            }
        }
        Ok(())
    }

    pub fn regime(&self) -> Regime {
        let threshold = 2.0 * self.gamma;
        if self.lambda > threshold {
            Regime::Weak
        } else if self.lambda < threshold {
            Regime::Strong
        } else {
            Regime::Boundary
        }
    }

    /// Frequency of the classical field, `omega0 - delta`.
    pub fn omega_f(&self) -> f64 {
        self.omega0 - self.delta
    }

    /// Dressed splitting `sqrt(delta^2 + 4 omega_drive^2)`.
    pub fn omega_d(&self) -> f64 {
        self.delta.hypot(2.0 * self.omega_drive)
    }

    pub fn derive(&self) -> Result<DerivedQuantities> {
        self.validate()?;
        Ok(DerivedQuantities::from_valid(self))
    }
}

/// Every symbol the closed-form kernel and amplitude need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    pub omega_f: f64,
    pub omega_d: f64,
    /// `lambda + i omega0`
    pub mu: Complex64,
    /// `lambda + i (delta - omega_d)`
    pub eta: Complex64,
    /// `mu beta - eta`
    pub eps0: Complex64,
    /// `-eta - mu beta`
    pub eps1: Complex64,
    /// Characteristic polynomial `s^3 + c2 s^2 + c1 s + c0`.
    pub cubic_c2: Complex64,
    pub cubic_c1: Complex64,
    pub cubic_c0: Complex64,
    /// `gamma * lambda`, the overall kernel strength (`F(0) = gamma lambda / 4`).
    pub gamma_lambda: f64,
}

impl DerivedQuantities {
    fn from_valid(p: &ModelParams) -> Self {
        let omega_f = p.omega_f();
        let omega_d = p.omega_d();
        let mu = Complex64::new(p.lambda, p.omega0);
        // omega0 - omega_d - omega_f collapses to delta - omega_d; evaluating it
        // that way avoids cancelling two ~1e9 numbers.
        let eta = Complex64::new(p.lambda, p.delta - omega_d);
        let mu_beta = mu * p.beta;
        let eps0 = mu_beta - eta;
        let eps1 = -eta - mu_beta;
        let gamma_lambda = p.gamma * p.lambda;
        let sum = eps0 + eps1;
        DerivedQuantities {
            omega_f,
            omega_d,
            mu,
            eta,
            eps0,
            eps1,
            cubic_c2: -sum,
            cubic_c1: eps0 * eps1 + gamma_lambda / 4.0,
            cubic_c0: -sum * (gamma_lambda / 8.0),
            gamma_lambda,
        }
    }

    /// Kernel value at zero lag, `gamma lambda / 4`.
    pub fn kernel_strength(&self) -> f64 {
        self.gamma_lambda / 4.0
    }

    pub fn cubic(&self, s: Complex64) -> Complex64 {
        ((s + self.cubic_c2) * s + self.cubic_c1) * s + self.cubic_c0
    }
}
