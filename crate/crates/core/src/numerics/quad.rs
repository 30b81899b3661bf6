//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 30;

/// `∫_a^b f` to within `max(abs_tol, rel_tol·|I|)` on every accepted panel
/// (tolerances are halved on each bisection).
pub fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    adapt(&f, a, b, abs_tol, rel_tol, 0)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
) -> Result<f64> {
    let (kronrod, err) = gk15(f, a, b);
    if !kronrod.is_finite() {
        return Err(Error::NonConvergence(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    if err <= abs_tol.max(rel_tol * kronrod.abs()) {
        return Ok(kronrod);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NonConvergence(format!(
            "quadrature did not converge on [{a}, {b}] (error estimate {err:e})"
        )));
    }
    let mid = 0.5 * (a + b);
    let left = adapt(f, a, mid, 0.5 * abs_tol, rel_tol, depth + 1)?;
    let right = adapt(f, mid, b, 0.5 * abs_tol, rel_tol, depth + 1)?;
    Ok(left + right)
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14, 0.0).unwrap();
        assert!((v - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
    }

    #[test]
    fn exponential_and_peaked_integrands() {
        let v = integrate(f64::exp, -60.0, 0.0, 1e-14, 1e-14).unwrap();
        assert!((v - (1.0 - (-60.0f64).exp())).abs() < 1e-13);
        let v = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-12).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((v - exact).abs() / exact < 1e-10);
    }

    #[test]
    fn empty_interval_and_bad_limits() {
        assert_eq!(integrate(|x| x, 3.0, 3.0, 1e-12, 0.0).unwrap(), 0.0);
        assert!(integrate(|x| x, 0.0, f64::INFINITY, 1e-12, 0.0).is_err());
        assert!(integrate(|x| 1.0 / x, -1.0, 1.0, 1e-12, 0.0).is_err());
    }
}
