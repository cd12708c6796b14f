//! Adaptive Gauss-Kronrod (7/15) quadrature and bisection for real
//! integrands.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: usize = 40;

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Integrate `f` over `[a, b]` to `|err| <= max(abs_tol, rel_tol |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (whole, err) = gk15(f, a, b);
    let tol = abs_tol.max(rel_tol * whole.abs());
    if err <= tol {
        return Ok(whole);
    }
    refine(f, a, b, whole, tol, 0)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (left, el) = gk15(f, a, m);
    let (right, er) = gk15(f, m, b);
    if el + er <= tol || (left + right - whole).abs() <= 0.1 * tol {
        return Ok(left + right);
    }
    if depth >= MAX_DEPTH || m <= a || m >= b {
        return Err(Error::QuadratureFailure { a, b });
    }
    Ok(
        refine(f, a, m, left, 0.5 * tol, depth + 1)?
            + refine(f, m, b, right, 0.5 * tol, depth + 1)?,
    )
}

/// Locate a sign change of `f` inside `[a, b]` (given `f(a) f(b) < 0`) to
/// width `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let mut fa = f(a);
    while b - a > xtol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(&|x: f64| x.powi(6) - 2.0 * x, 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((v - (128.0 / 7.0 - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(
            &|x: f64| (40.0 * x).sin() * (-x).exp(),
            0.0,
            3.0,
            1e-13,
            1e-12,
        )
        .unwrap();
        // ∫ e^{-x} sin(kx) = [k - e^{-3}(sin 3k + k cos 3k)] / (1 + k^2)
        let k = 40.0f64;
        let want = (k - (-3.0f64).exp() * ((3.0 * k).sin() + k * (3.0 * k).cos())) / (1.0 + k * k);
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(&|x: f64| x, 1.0, 1.0, 1e-12, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn nonintegrable_singularity_fails() {
        let r = integrate(&|x: f64| 1.0 / x, 0.0, 1.0, 1e-12, 1e-12);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn bisection_finds_root() {
        let r = bisect(&|x: f64| x.cos(), 1.0, 2.0, 1e-13);
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
