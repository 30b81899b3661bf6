//! Exponential integral `Ei(x) = PV ∫_{-∞}^{x} e^t / t dt`.
//!
//! Three regimes:
//!
//! * `-1 ≤ x ≤ 40`, `x ≠ 0`: the convergent series `γ + ln|x| + Σ x^k / (k·k!)`.
//!   For positive `x` every term is positive, so there is no cancellation.
//! * `x > 40`: the asymptotic expansion `e^x / x · Σ k! / x^k`, truncated at
//!   its smallest term (about `1e-17` relative at the switch point).
//! * `x < -1`: `Ei(x) = -E1(-x)` with `E1` from its continued fraction. The
//!   series alternates with terms as large as `e^{|x|}` here, so it loses all
//!   significant digits well before `|x| = 40`.

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_LIMIT: f64 = 40.0;
const NEG_SERIES_LIMIT: f64 = -1.0;

/// Principal-value exponential integral.
///
/// Returns [`Error::Domain`] at `x = 0` (logarithmic singularity) and for NaN,
/// and [`Error::Overflow`] once `Ei(x)` exceeds `f64::MAX` (`x ≳ 716`).
pub fn ei(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("Ei is undefined for NaN".into()));
    }
    if x == 0.0 {
        return Err(Error::Domain(
            "Ei has a logarithmic singularity at x = 0".into(),
        ));
    }
    let value = if x < NEG_SERIES_LIMIT {
        -e1_continued_fraction(-x)
    } else if x <= SERIES_LIMIT {
        ei_series(x)
    } else {
        ei_asymptotic(x)
    };
    if value.is_infinite() {
        return Err(Error::Overflow(format!("Ei({x}) overflows f64")));
    }
    Ok(value)
}

fn ei_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..500 {
        let k = k as f64;
        term *= x / k;
        let contribution = term / k;
        sum += contribution;
        if contribution.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    EULER_GAMMA + x.abs().ln() + sum
}

fn ei_asymptotic(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut k = 1.0;
    loop {
        let next = term * k / x;
        if next >= term || next < 1e-17 {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    // e^x / x without overflowing e^x first
    (x - x.ln()).exp() * sum
}

/// `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x ≥ 1` via the modified Lentz algorithm.
fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}
