//! Quantum-speed-limit ratio and non-Markovianity of the amplitude-damping
//! evolution.
//!
//! Both measures reduce to the total variation of the excited population
//! `P(t) = |C1(t)|^2` over `[0, tau]`:
//!
//! ```text
//! tau_qsl / tau = (1 - P(tau)) / ∫_0^tau |dP/dt| dt
//! N             = (∫_0^tau |dP/dt| dt + P(tau) - 1) / 2
//! ```
//!
//! The memory measure uses the pair `|E><E|`, `|G><G|`, whose trace distance is
//! exactly `P(t)`.

use crate::amplitude::AmplitudeSolution;
use crate::error::{Error, Result};
use crate::quad;

/// Scan density used to bracket sign changes of `dP/dt`.
pub const SCAN_POINTS_PER_UNIT_TIME: f64 = 4096.0;
/// Bisection width for sign changes.
pub const ROOT_TOL: f64 = 1e-12;
/// Relative accuracy target of the path integral.
pub const PATH_REL_TOL: f64 = 1e-10;
/// `N` values at or below this magnitude are reported as exactly zero.
pub const NM_CLAMP: f64 = 1e-12;
/// Path integrals below this mean nothing happened.
pub const NO_EVOLUTION: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionMetrics {
    pub qsl_ratio: f64,
    pub nm: f64,
    pub p_tau: f64,
    pub path_integral: f64,
    /// `|qsl_ratio - (1 - p_tau) / (1 - p_tau + 2 nm)|`
    pub identity_residual: f64,
}

/// Scan settings for [`path_integral_with`].
#[derive(Debug, Clone, Copy)]
pub struct PathQuadrature {
    pub scan_points_per_unit_time: f64,
    pub rel_tol: f64,
}

impl Default for PathQuadrature {
    fn default() -> Self {
        PathQuadrature {
            scan_points_per_unit_time: SCAN_POINTS_PER_UNIT_TIME,
            rel_tol: PATH_REL_TOL,
        }
    }
}

/// Points in `(0, tau)` where `dP/dt` changes sign.
pub fn sign_changes(sol: &AmplitudeSolution, tau: f64, scan_per_unit: f64) -> Vec<f64> {
    let rate = |t: f64| sol.population_rate(t);
    let n = ((tau * scan_per_unit).ceil() as usize).max(16);
    let mut out = Vec::new();
    let mut prev_t = 0.0;
    // dP/dt vanishes at t = 0 itself; take the sign just after the origin
    let mut prev = rate(tau / n as f64 * 1e-3);
    for i in 1..=n {
        let t = tau * i as f64 / n as f64;
        let g = rate(t);
        if g != 0.0 && prev != 0.0 && (g < 0.0) != (prev < 0.0) {
            out.push(quad::bisect(&rate, prev_t, t, ROOT_TOL));
        }
        if g != 0.0 {
            prev = g;
            prev_t = t;
        }
    }
    out
}

pub fn path_integral(sol: &AmplitudeSolution, tau: f64) -> Result<f64> {
    path_integral_with(sol, tau, PathQuadrature::default())
}

/// `∫_0^tau |dP/dt| dt`, integrating the smooth rate between its sign changes.
pub fn path_integral_with(sol: &AmplitudeSolution, tau: f64, q: PathQuadrature) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter {
            field: "tau",
            reason: format!("must be > 0, got {tau}"),
        });
    }
    if sol.gamma_lambda == 0.0 {
        return Ok(0.0);
    }
    let rate = |t: f64| sol.population_rate(t);
    let mut knots = vec![0.0];
    knots.extend(sign_changes(sol, tau, q.scan_points_per_unit_time));
    knots.push(tau);

    // Absolute tolerance per piece, scaled by the largest rate magnitude seen.
    let scale = knots
        .windows(2)
        .map(|w| rate(0.5 * (w[0] + w[1])).abs() * (w[1] - w[0]))
        .fold(0.0, f64::max);
    let abs_tol = (q.rel_tol * scale / knots.len() as f64).max(1e-300);

    let mut total = 0.0;
    for w in knots.windows(2) {
        total += quad::integrate(&rate, w[0], w[1], abs_tol, q.rel_tol)?.abs();
    }
    Ok(total)
}

pub fn qsl_ratio(sol: &AmplitudeSolution, tau: f64) -> Result<f64> {
    let path = path_integral(sol, tau)?;
    ratio(sol.population(tau), path)
}

fn ratio(p_tau: f64, path: f64) -> Result<f64> {
    if path < NO_EVOLUTION {
        return Err(Error::NoEvolution {
            path_integral: path,
        });
    }
    // quadrature noise can push a monotone decay a hair above one
    Ok(((1.0 - p_tau) / path).min(1.0))
}

pub fn non_markovianity(sol: &AmplitudeSolution, tau: f64) -> Result<f64> {
    let path = path_integral(sol, tau)?;
    Ok(nm_from(path, sol.population(tau)))
}

fn nm_from(path: f64, p_tau: f64) -> f64 {
    let nm = 0.5 * (path + p_tau - 1.0);
    if nm <= NM_CLAMP {
        0.0
    } else {
        nm
    }
}

pub fn metrics(sol: &AmplitudeSolution, tau: f64) -> Result<EvolutionMetrics> {
    let path = path_integral(sol, tau)?;
    let p_tau = sol.population(tau);
    let qsl = ratio(p_tau, path)?;
    let nm = nm_from(path, p_tau);
    let identity = (1.0 - p_tau) / (1.0 - p_tau + 2.0 * nm);
    Ok(EvolutionMetrics {
        qsl_ratio: qsl,
        nm,
        p_tau,
        path_integral: path,
        identity_residual: (qsl - identity).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::QubitState;
    use crate::model::ModelParams;
    use num_complex::Complex64;

    fn sol(lambda: f64, omega: f64, beta: f64) -> AmplitudeSolution {
        let p = ModelParams::default()
            .with_lambda(lambda)
            .with_drive(omega)
            .with_beta(beta);
        AmplitudeSolution::from_params(&p).unwrap()
    }

    /// Composite trapezoid of |dP/dt| on a uniform grid.
    fn trapezoid_reference(s: &AmplitudeSolution, tau: f64, n: usize) -> f64 {
        let h = tau / n as f64;
        let mut acc = 0.5 * (s.population_rate(0.0).abs() + s.population_rate(tau).abs());
        for i in 1..n {
            acc += s.population_rate(i as f64 * h).abs();
        }
        acc * h
    }

    /// Total variation of P through the exact antiderivative.
    fn variation_reference(s: &AmplitudeSolution, tau: f64) -> f64 {
        let mut knots = vec![0.0];
        knots.extend(sign_changes(s, tau, 4096.0));
        knots.push(tau);
        knots
            .windows(2)
            .map(|w| (s.population(w[1]) - s.population(w[0])).abs())
            .sum()
    }

    fn monotone_on_grid(s: &AmplitudeSolution, tau: f64, n: usize) -> bool {
        // dP/dt(0) is zero up to rounding
        (1..=n).all(|i| s.population_rate(tau * i as f64 / n as f64) <= 0.0)
    }

    #[test]
    fn monotone_decay_path_is_population_drop() {
        let s = sol(3.0, 0.0, 0.0);
        assert!(monotone_on_grid(&s, 1.0, 10_000));
        let path = path_integral(&s, 1.0).unwrap();
        assert!((path - (1.0 - s.population(1.0))).abs() < 1e-9);
    }

    #[test]
    fn decoupled_qubit_has_no_path() {
        let p = ModelParams::default().with_gamma(0.0);
        let s = AmplitudeSolution::from_params(&p).unwrap();
        assert_eq!(path_integral(&s, 1.0).unwrap(), 0.0);
        assert!(matches!(qsl_ratio(&s, 1.0), Err(Error::NoEvolution { .. })));
        assert_eq!(non_markovianity(&s, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn oscillatory_case_against_references() {
        let s = sol(0.01, 10.0, 0.0);
        let path = path_integral(&s, 1.0).unwrap();
        let drop = 1.0 - s.population(1.0);
        assert!(path > drop);
        let trap = trapezoid_reference(&s, 1.0, 1_000_000);
        assert!((path - trap).abs() < 1e-7, "path {path} trap {trap}");
        assert!((path - variation_reference(&s, 1.0)).abs() < 1e-12);

        let nm = non_markovianity(&s, 1.0).unwrap();
        assert!(nm > 0.0);
        assert!((path - drop - 2.0 * nm).abs() < 1e-15);
        let trap_nm = 0.5 * (trap + s.population(1.0) - 1.0);
        assert!((nm - trap_nm).abs() < 1e-7);
    }

    #[test]
    fn no_speedup_without_backflow() {
        for lambda in [3.0, 0.01] {
            let s = sol(lambda, 0.0, 0.0);
            assert!(monotone_on_grid(&s, 1.0, 10_000));
            let q = qsl_ratio(&s, 1.0).unwrap();
            assert!((q - 1.0).abs() < 1e-9, "lambda {lambda}: {q}");
            assert_eq!(non_markovianity(&s, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn speedup_matches_memory_identity() {
        let s = sol(0.01, 10.0, 0.0);
        let m = metrics(&s, 1.0).unwrap();
        assert!(m.qsl_ratio < 1.0);
        let q = (1.0 - m.p_tau) / (1.0 - m.p_tau + 2.0 * m.nm);
        assert!((m.qsl_ratio - q).abs() < 1e-9);
        assert!(m.identity_residual <= 1e-9);
    }

    #[test]
    fn zero_memory_means_full_time() {
        let m = metrics(&sol(3.0, 0.0, 0.0), 1.0).unwrap();
        assert_eq!(m.nm, 0.0);
        assert!((m.qsl_ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn memory_and_ratio_move_oppositely() {
        let a = metrics(&sol(0.01, 10.0, 0.0), 1.0).unwrap();
        let b = metrics(&sol(0.01, 20.0, 0.0), 1.0).unwrap();
        assert!((a.p_tau - b.p_tau).abs() < 1e-5);
        assert!((b.nm - a.nm) * (b.qsl_ratio - a.qsl_ratio) < 0.0);
    }

    #[test]
    fn resolution_doubling_is_stable() {
        for (l, o, b) in [(0.01, 10.0, 0.0), (3.0, 12.0, 1e-9), (0.05, 27.0, 1.5e-9)] {
            let s = sol(l, o, b);
            let coarse = path_integral(&s, 1.0).unwrap();
            let fine = path_integral_with(
                &s,
                1.0,
                PathQuadrature {
                    scan_points_per_unit_time: 2.0 * SCAN_POINTS_PER_UNIT_TIME,
                    rel_tol: 0.5 * PATH_REL_TOL,
                },
            )
            .unwrap();
            assert!((coarse - fine).abs() <= 1e-8 * fine);
        }
    }

    #[test]
    fn rejects_nonpositive_horizon() {
        assert!(path_integral(&sol(3.0, 0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn chosen_pair_maximises_backflow() {
        // Random pairs of initial states never beat {|E><E|, |G><G|}.
        use rand::{Rng, SeedableRng};
        let s = sol(0.01, 10.0, 0.0);
        let tau = 1.0;
        let n = 4000;
        let backflow = |a: &QubitState, b: &QubitState| {
            let mut acc = 0.0;
            let mut prev = a.trace_distance(b);
            for i in 1..=n {
                let t = tau * i as f64 / n as f64;
                let ra = s.density_matrix_at(a, t).unwrap();
                let rb = s.density_matrix_at(b, t).unwrap();
                let d = ra.trace_distance(&rb);
                if d > prev {
                    acc += d - prev;
                }
                prev = d;
            }
            acc
        };
        let best = backflow(&QubitState::excited(), &QubitState::ground());
        assert!((best - non_markovianity(&s, tau).unwrap()).abs() < 1e-6);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut random_state = || {
            let z = |r: &mut rand_chacha::ChaCha8Rng| {
                Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
            };
            QubitState::pure(z(&mut rng), z(&mut rng))
        };
        for _ in 0..200 {
            let a = random_state();
            let b = random_state();
            assert!(backflow(&a, &b) <= best + 1e-9);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn identity_and_triangle_inequality(
                ll in -5.3f64..2.31,
                omega in 0.0f64..30.0,
                beta in 0.0f64..2e-9,
            ) {
                let s = sol(ll.exp(), omega, beta);
                let m = metrics(&s, 1.0).unwrap();
                prop_assert!(m.path_integral >= 1.0 - m.p_tau - 1e-10);
                prop_assert!(m.qsl_ratio > 0.0 && m.qsl_ratio <= 1.0);
                prop_assert!(m.nm >= 0.0);
                if 1.0 - m.p_tau > 1e-9 {
                    prop_assert!((m.qsl_ratio * (1.0 - m.p_tau + 2.0 * m.nm) - (1.0 - m.p_tau)).abs() <= 1e-9);
                }
                if monotone_on_grid(&s, 1.0, 10_000) {
                    prop_assert!(m.nm <= 1e-9);
                    prop_assert!(m.qsl_ratio >= 1.0 - 1e-9);
                }
            }
        }
    }
}
