//! Reservoir correlation function `F(t, t1)` entering
//! `dC1/dt = -∫_0^t F(t, t1) C1(t1) dt1`.
//!
//! Two evaluators are provided. The finite-cavity form keeps the two boundary
//! echo terms, whose exponents depend on `t + t1`; it exists to feed the
//! Volterra oracle. The continuum form is the `tau0 -> inf` limit, a sum of
//! two damped exponentials of the lag, and is what the closed-form amplitude
//! solves exactly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DerivedQuantities, ModelParams};

/// `(gamma lambda / 8) [exp(eps0 dt) + exp(eps1 dt)]`.
pub fn eval_continuum(d: &DerivedQuantities, dt: f64) -> Complex64 {
    (d.gamma_lambda / 8.0) * ((d.eps0 * dt).exp() + (d.eps1 * dt).exp())
}

/// Four-term finite-cavity kernel, including the absolute values in the
/// damping exponents. Not a function of the lag alone.
pub fn eval_finite_cavity(
    d: &DerivedQuantities,
    params: &ModelParams,
    t: f64,
    t1: f64,
) -> Result<Complex64> {
    let tau0 = params.tau0.finite().ok_or(Error::InfiniteTransitTime)?;
    Ok(finite_cavity_terms(d, params, tau0, t, t1).iter().sum())
}

/// The individual echo/direct terms `[F1, F2, F3, F4]`.
pub fn finite_cavity_terms(
    d: &DerivedQuantities,
    params: &ModelParams,
    tau0: f64,
    t: f64,
    t1: f64,
) -> [Complex64; 4] {
    let w = d.gamma_lambda / 8.0;
    let lambda = params.lambda;
    let beta = params.beta;
    let omega0 = params.omega0;
    let lag = t - t1;
    let sum = t + t1;
    // omega_d - omega0 + omega_f
    let shift = d.omega_d - params.delta;

    let term = |amp: f64, phase: f64, decay: f64| {
        Complex64::from_polar(amp * (-lambda * decay.abs()).exp(), phase)
    };

    let f1 = term(
        -w,
        omega0 * (beta * sum - 2.0 * tau0) + shift * lag,
        -beta * sum + 2.0 * tau0 + lag,
    );
    let f2 = term(w, (shift + omega0 * beta) * lag, (1.0 - beta) * lag);
    let f3 = term(w, (shift - omega0 * beta) * lag, (1.0 + beta) * lag);
    let f4 = term(
        -w,
        -omega0 * (beta * sum - 2.0 * tau0) + shift * lag,
        beta * sum - 2.0 * tau0 + lag,
    );
    [f1, f2, f3, f4]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    FiniteCavity,
    Continuum,
}

/// A kernel bound to one parameter set.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    kind: KernelKind,
    params: ModelParams,
    derived: DerivedQuantities,
}

impl Kernel {
    pub fn continuum(params: &ModelParams) -> Result<Self> {
        Ok(Kernel {
            kind: KernelKind::Continuum,
            params: *params,
            derived: params.derive()?,
        })
    }

    pub fn finite_cavity(params: &ModelParams) -> Result<Self> {
        let derived = params.derive()?;
        if params.tau0.is_infinite() {
            return Err(Error::InfiniteTransitTime);
        }
        Ok(Kernel {
            kind: KernelKind::FiniteCavity,
            params: *params,
            derived,
        })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn derived(&self) -> &DerivedQuantities {
        &self.derived
    }

    pub fn is_zero(&self) -> bool {
        self.derived.gamma_lambda == 0.0
    }
}

/// Anything that can act as the memory kernel of the integro-differential
/// equation.
pub trait MemoryKernel: Sync {
    fn eval(&self, t: f64, t1: f64) -> Complex64;
}

impl MemoryKernel for Kernel {
    fn eval(&self, t: f64, t1: f64) -> Complex64 {
        match self.kind {
            KernelKind::Continuum => eval_continuum(&self.derived, t - t1),
            KernelKind::FiniteCavity => {
                // checked at construction
                let tau0 = self.params.tau0.finite().unwrap_or(f64::INFINITY);
                finite_cavity_terms(&self.derived, &self.params, tau0, t, t1)
                    .iter()
                    .sum()
            }
        }
    }
}

impl<F> MemoryKernel for F
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    fn eval(&self, t: f64, t1: f64) -> Complex64 {
        self(t, t1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TransitTime;

    fn params() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn zero_lag_gives_quarter_strength() {
        for p in [
            params().with_lambda(3.0),
            params().with_lambda(0.01).with_drive(5.0).with_beta(1e-9),
        ] {
            let d = p.derive().unwrap();
            let v = eval_continuum(&d, 0.0);
            assert!((v - Complex64::new(p.lambda / 4.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn static_qubit_terms_coincide() {
        let p = params().with_lambda(2.0).with_drive(1.5);
        let d = p.derive().unwrap();
        for dt in [0.0, 0.1, 0.7, 3.0] {
            let expect = (p.lambda / 4.0) * (-d.eta * dt).exp();
            assert!((eval_continuum(&d, dt) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn strong_driven_hand_value() {
        let p = params().with_lambda(0.01).with_drive(1.0);
        let d = p.derive().unwrap();
        let amp = 0.0025 * (-0.01f64).exp();
        let expect = Complex64::new(amp * 2f64.cos(), amp * 2f64.sin());
        assert!((eval_continuum(&d, 1.0) - expect).norm() < 1e-16);
    }

    #[test]
    fn continuum_envelope_bound() {
        let p = params().with_lambda(0.8).with_drive(3.0).with_beta(1.3e-9);
        let d = p.derive().unwrap();
        for i in 0..=400 {
            let dt = i as f64 * 0.05;
            let bound = (p.lambda / 4.0) * (-(p.lambda - p.lambda * p.beta) * dt).exp();
            assert!(eval_continuum(&d, dt).norm() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn linear_in_gamma() {
        let p = params().with_lambda(0.3).with_drive(2.0).with_beta(5e-10);
        let p2 = p.with_gamma(2.0);
        let d = p.derive().unwrap();
        let d2 = p2.derive().unwrap();
        for dt in [0.0, 0.5, 2.0] {
            assert_eq!(eval_continuum(&d2, dt), 2.0 * eval_continuum(&d, dt));
        }
        let p = p.with_tau0(TransitTime::Finite(4.0));
        let p2 = p2.with_tau0(TransitTime::Finite(4.0));
        let a = eval_finite_cavity(&p.derive().unwrap(), &p, 1.2, 0.4).unwrap();
        let b = eval_finite_cavity(&p2.derive().unwrap(), &p2, 1.2, 0.4).unwrap();
        assert_eq!(b, 2.0 * a);
    }

    #[test]
    fn zero_gamma_kernel_vanishes() {
        let p = params().with_gamma(0.0).with_tau0(TransitTime::Finite(1.0));
        let d = p.derive().unwrap();
        assert_eq!(eval_continuum(&d, 0.3), Complex64::new(0.0, 0.0));
        assert_eq!(
            eval_finite_cavity(&d, &p, 0.9, 0.2).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn finite_cavity_rejects_infinite_transit() {
        let p = params();
        let d = p.derive().unwrap();
        assert_eq!(
            eval_finite_cavity(&d, &p, 1.0, 0.5),
            Err(Error::InfiniteTransitTime)
        );
        assert!(Kernel::finite_cavity(&p).is_err());
    }

    #[test]
    fn equal_times_echo_pair_is_real_and_negative_partner() {
        // At t = t1 and beta = 0 the direct pair sums to gamma lambda / 4 and the
        // echo pair to -(gamma lambda / 4) exp(-2 lambda tau0) cos(2 omega0 tau0).
        let tau0 = 0.37;
        let p = params()
            .with_lambda(1.1)
            .with_drive(0.8)
            .with_tau0(TransitTime::Finite(tau0));
        let d = p.derive().unwrap();
        for t in [0.0, 0.2, 1.5] {
            let [f1, f2, f3, f4] = finite_cavity_terms(&d, &p, tau0, t, t);
            assert!((f2 + f3 - Complex64::new(p.lambda / 4.0, 0.0)).norm() < 1e-15);
            assert!((f4 - f1.conj()).norm() < 1e-15);
            let echo =
                -(p.lambda / 4.0) * (-2.0 * p.lambda * tau0).exp() * (2.0 * p.omega0 * tau0).cos();
            // 2 omega0 tau0 ~ 1e9 rad, so the cosine carries ~1e-7 absolute phase error
            assert!(((f1 + f4).re - echo).abs() < 1e-6);
            assert!((f1 + f4).im.abs() < 1e-15);
        }
    }

    #[test]
    fn long_cavity_matches_continuum() {
        for lambda in [3.0, 0.01] {
            let tau0 = 50.0 / lambda;
            let p = params()
                .with_lambda(lambda)
                .with_drive(5.0)
                .with_tau0(TransitTime::Finite(tau0));
            let d = p.derive().unwrap();
            for i in 0..=20 {
                let t = i as f64 * 0.5;
                for j in 0..=i {
                    let t1 = j as f64 * 0.5;
                    let fc = eval_finite_cavity(&d, &p, t, t1).unwrap();
                    let cont = eval_continuum(&d, t - t1);
                    assert!((fc - cont).norm() < 1e-12, "t={t} t1={t1}");
                }
            }
        }
    }

    #[test]
    fn closures_are_kernels() {
        let k = |t: f64, t1: f64| Complex64::new(t - t1, 0.0);
        assert_eq!(MemoryKernel::eval(&k, 2.0, 0.5), Complex64::new(1.5, 0.0));
    }
}
