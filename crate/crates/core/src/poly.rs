//! Roots of a monic complex cubic.
//!
//! Cardano's formula seeds the roots and a few Newton steps on the original
//! polynomial polish them; the closed form alone loses digits when two roots
//! cluster.

use num_complex::Complex64;

/// Evaluate `s^3 + c2 s^2 + c1 s + c0` and its derivative.
fn eval(c2: Complex64, c1: Complex64, c0: Complex64, s: Complex64) -> (Complex64, Complex64) {
    let p = ((s + c2) * s + c1) * s + c0;
    let dp = (3.0 * s + 2.0 * c2) * s + c1;
    (p, dp)
}

/// All three roots of `s^3 + c2 s^2 + c1 s + c0`, with multiplicity.
pub fn cubic_roots(c2: Complex64, c1: Complex64, c0: Complex64) -> [Complex64; 3] {
    let shift = c2 / 3.0;
    // depressed cubic x^3 + p x + q with s = x - c2/3
    let p = c1 - c2 * shift;
    let q = 2.0 * shift * shift * shift - shift * c1 + c0;

    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let sq = disc.sqrt();
    // pick the branch that avoids cancellation in -q/2 +- sqrt(disc)
    let a = -q / 2.0 + sq;
    let b = -q / 2.0 - sq;
    let u3 = if a.norm() >= b.norm() { a } else { b };

    let mut roots = if u3.norm() == 0.0 {
        // p = q = 0: triple root
        [Complex64::new(0.0, 0.0); 3]
    } else {
        let u = u3.cbrt();
        let v = -p / (3.0 * u);
        let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        let w2 = w.conj();
        [u + v, w * u + w2 * v, w2 * u + w * v]
    };
    for r in roots.iter_mut() {
        *r -= shift;
    }

    for r in roots.iter_mut() {
        polish(c2, c1, c0, r);
    }
    roots
}

fn polish(c2: Complex64, c1: Complex64, c0: Complex64, root: &mut Complex64) {
    let (mut best_p, _) = eval(c2, c1, c0, *root);
    for _ in 0..6 {
        let (p, dp) = eval(c2, c1, c0, *root);
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            return;
        }
        let next = *root - p / dp;
        let (np, _) = eval(c2, c1, c0, next);
        // Newton can wander near clustered roots; only accept improvements.
        if np.norm() < best_p.norm() {
            best_p = np;
            *root = next;
        } else {
            return;
        }
    }
}
