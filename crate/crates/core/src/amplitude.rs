//! Closed-form survival amplitude of the dressed excited state.
//!
//! With the continuum kernel the Laplace transform of the amplitude is
//! `(s - eps0)(s - eps1) / P(s)` with `P` the cubic from [`DerivedQuantities`],
//! so `C1(t) = sum_k A_k exp(s_k t)` with partial-fraction residues
//! `A_k = (s_k - eps0)(s_k - eps1) / prod_{j != k} (s_k - s_j)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DerivedQuantities, ModelParams};
use crate::poly::cubic_roots;

/// Relative root separation below which the three-exponential form is refused.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

/// Amplitudes smaller than this make the time-local rates undefined.
pub const AMPLITUDE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSolution {
    pub roots: [Complex64; 3],
    pub residues: [Complex64; 3],
    pub min_root_gap: f64,
    /// `gamma lambda`, kept for the sum rules.
    pub gamma_lambda: f64,
}

/// Time-local master-equation coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    /// Decoherence rate, `-2 Re(dC1/dt / C1)`.
    pub gamma: f64,
    /// Lamb shift, `-2 Im(dC1/dt / C1)`.
    pub lamb_shift: f64,
}

impl AmplitudeSolution {
    pub fn from_params(params: &ModelParams) -> Result<Self> {
        Self::solve(&params.derive()?)
    }

    /// Roots of the characteristic cubic and their residues.
    pub fn solve(d: &DerivedQuantities) -> Result<Self> {
        if d.gamma_lambda == 0.0 {
            // Decoupled: P(s) = s (s - eps0)(s - eps1) cancels against the
            // numerator, leaving a single pole at the origin.
            let zero = Complex64::new(0.0, 0.0);
            return Ok(AmplitudeSolution {
                roots: [zero, d.eps0, d.eps1],
                residues: [Complex64::new(1.0, 0.0), zero, zero],
                min_root_gap: pair_gaps([zero, d.eps0, d.eps1]),
                gamma_lambda: 0.0,
            });
        }

        if d.eps0 == d.eps1 {
            Self::solve_static(d)
        } else {
            Self::solve_general(d)
        }
    }

    fn solve_general(d: &DerivedQuantities) -> Result<Self> {
        let roots = cubic_roots(d.cubic_c2, d.cubic_c1, d.cubic_c0);
        let min_root_gap = pair_gaps(roots);
        let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
        if min_root_gap < DEGENERACY_THRESHOLD * scale {
            return Err(Error::NearDegenerateRoots { min_root_gap });
        }

        let split = d.eps0 - d.eps1;
        let mut roots = roots;
        let mut numerators = [Complex64::new(0.0, 0.0); 3];
        for k in 0..3 {
            let (eps, sep) = if (roots[k] - d.eps0).norm() <= (roots[k] - d.eps1).norm() {
                (d.eps0, split)
            } else {
                (d.eps1, -split)
            };
            let u = refine_offset(eps, sep, d.gamma_lambda / 8.0, roots[k] - eps);
            roots[k] = eps + u;
            numerators[k] = u * (u + sep);
        }

        let mut residues = [Complex64::new(0.0, 0.0); 3];
        for k in 0..3 {
            let mut den = Complex64::new(1.0, 0.0);
            for (j, &sj) in roots.iter().enumerate() {
                if j != k {
                    den *= roots[k] - sj;
                }
            }
            residues[k] = numerators[k] / den;
        }

        Ok(AmplitudeSolution {
            roots,
            residues,
            min_root_gap,
            gamma_lambda: d.gamma_lambda,
        })
    }

    /// `eps0 == eps1 == -eta` (no Doppler splitting). The cubic factors as
    /// `(s + eta)(s^2 + eta s + gamma lambda / 4)` and the root `-eta` cancels
    /// against the numerator, so its residue is exactly zero. It may sit
    /// arbitrarily close to a live root without harming the formula, so only
    /// the quadratic pair is checked for degeneracy.
    fn solve_static(d: &DerivedQuantities) -> Result<Self> {
        let eta = d.eta;
        let g4 = d.gamma_lambda / 4.0;
        let disc = (eta * eta - 4.0 * g4).sqrt();
        let big = if (eta + disc).norm() >= (eta - disc).norm() {
            -(eta + disc) / 2.0
        } else {
            -(eta - disc) / 2.0
        };
        let small = g4 / big;
        let live_gap = (big - small).norm();
        let scale = big.norm().max(small.norm()).max(eta.norm()).max(1.0);
        if live_gap < DEGENERACY_THRESHOLD * scale {
            return Err(Error::NearDegenerateRoots {
                min_root_gap: live_gap,
            });
        }
        let roots = [big, small, -eta];
        let residues = [
            (big + eta) / (big - small),
            (small + eta) / (small - big),
            Complex64::new(0.0, 0.0),
        ];
        Ok(AmplitudeSolution {
            roots,
            residues,
            min_root_gap: pair_gaps(roots),
            gamma_lambda: d.gamma_lambda,
        })
    }

    pub fn max_root_norm(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// `(C1(t), dC1/dt)` sharing the exponentials.
    pub fn c1_and_dot(&self, t: f64) -> (Complex64, Complex64) {
        let mut c = Complex64::new(0.0, 0.0);
        let mut dc = Complex64::new(0.0, 0.0);
        for (a, s) in self.residues.iter().zip(&self.roots) {
            let term = a * (s * t).exp();
            c += term;
            dc += term * s;
        }
        (c, dc)
    }

    pub fn c1_at(&self, t: f64) -> Complex64 {
        self.residues
            .iter()
            .zip(&self.roots)
            .map(|(a, s)| a * (s * t).exp())
            .sum()
    }

    pub fn c1_dot_at(&self, t: f64) -> Complex64 {
        self.residues
            .iter()
            .zip(&self.roots)
            .map(|(a, s)| a * s * (s * t).exp())
            .sum()
    }

    /// Excited-state population `|C1(t)|^2`.
    pub fn population(&self, t: f64) -> f64 {
        self.c1_at(t).norm_sqr()
    }

    /// `d|C1|^2/dt = 2 Re(conj(C1) dC1/dt)`.
    pub fn population_rate(&self, t: f64) -> f64 {
        let (c, dc) = self.c1_and_dot(t);
        2.0 * (c.conj() * dc).re
    }

    pub fn rates_at(&self, t: f64) -> Result<Rates> {
        let (c, dc) = self.c1_and_dot(t);
        let magnitude = c.norm();
        if magnitude < AMPLITUDE_FLOOR {
            return Err(Error::AmplitudeZero { t, magnitude });
        }
        let r = dc / c;
        Ok(Rates {
            gamma: -2.0 * r.re,
            lamb_shift: -2.0 * r.im,
        })
    }

    pub fn density_matrix_at(&self, rho0: &QubitState, t: f64) -> Result<QubitState> {
        rho0.validate()?;
        let c = self.c1_at(t);
        let ee = rho0.rho_ee.re * c.norm_sqr();
        Ok(QubitState {
            rho_ee: Complex64::new(ee, 0.0),
            rho_eg: rho0.rho_eg * c,
            rho_ge: rho0.rho_ge * c.conj(),
            rho_gg: Complex64::new(1.0 - ee, 0.0),
        })
    }
}

fn pair_gaps(r: [Complex64; 3]) -> f64 {
    (r[0] - r[1])
        .norm()
        .min((r[0] - r[2]).norm())
        .min((r[1] - r[2]).norm())
}

/// Qubit density matrix in the dressed basis `{|E>, |G>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub rho_ee: Complex64,
    pub rho_eg: Complex64,
    pub rho_ge: Complex64,
    pub rho_gg: Complex64,
}

impl QubitState {
    const TOL: f64 = 1e-12;

    pub fn excited() -> Self {
        QubitState::diagonal(1.0)
    }

    pub fn ground() -> Self {
        QubitState::diagonal(0.0)
    }

    pub fn diagonal(p_excited: f64) -> Self {
        QubitState {
            rho_ee: Complex64::new(p_excited, 0.0),
            rho_eg: Complex64::new(0.0, 0.0),
            rho_ge: Complex64::new(0.0, 0.0),
            rho_gg: Complex64::new(1.0 - p_excited, 0.0),
        }
    }

    /// Pure state `a|E> + b|G>`, normalised.
    pub fn pure(a: Complex64, b: Complex64) -> Self {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / n, b / n);
        QubitState {
            rho_ee: Complex64::new(a.norm_sqr(), 0.0),
            rho_eg: a * b.conj(),
            rho_ge: b * a.conj(),
            rho_gg: Complex64::new(b.norm_sqr(), 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidState(m.to_string()));
        if self.rho_ee.im.abs() > Self::TOL || self.rho_gg.im.abs() > Self::TOL {
            return bad("diagonal entries must be real");
        }
        if (self.rho_ee.re + self.rho_gg.re - 1.0).abs() > Self::TOL {
            return bad("trace must be 1");
        }
        if !(-Self::TOL..=1.0 + Self::TOL).contains(&self.rho_ee.re) {
            return bad("excited population must lie in [0, 1]");
        }
        if (self.rho_ge - self.rho_eg.conj()).norm() > Self::TOL {
            return bad("off-diagonal entries must be complex conjugates");
        }
        if self.rho_eg.norm_sqr() > self.rho_ee.re * self.rho_gg.re + Self::TOL {
            return bad("matrix is not positive semidefinite");
        }
        Ok(())
    }

    /// Trace distance `(1/2) Tr|rho - sigma|` between two qubit states.
    pub fn trace_distance(&self, other: &QubitState) -> f64 {
        let a = (self.rho_ee - other.rho_ee).re;
        let b = self.rho_eg - other.rho_eg;
        (a * a + b.norm_sqr()).sqrt()
    }
}

/// Newton refinement of `u = s - eps` on the shifted cubic
/// `(u + eps) u (u + sep) + g8 (2u + sep)`, where `sep` is the distance to
/// the other Doppler pole. Roots hugging a pole get their small offset to full
/// relative precision, which the residue numerator needs.
fn refine_offset(eps: Complex64, sep: Complex64, g8: f64, mut u: Complex64) -> Complex64 {
    let q = |u: Complex64| (u + eps) * u * (u + sep) + g8 * (2.0 * u + sep);
    let mut r = q(u).norm();
    for _ in 0..8 {
        let dq = u * (u + sep) + (u + eps) * (2.0 * u + sep) + 2.0 * g8;
        if dq.norm() == 0.0 {
            break;
        }
        let next = u - q(u) / dq;
        let rn = q(next).norm();
        if !(rn < r) {
            break;
        }
        u = next;
        r = rn;
    }
    u
}
