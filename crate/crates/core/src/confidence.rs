//! Confidence intervals for the relative risk `p_x / p_y`.
//!
//! The interval's confidence is called `level` (e.g. 0.95) throughout, to
//! keep it apart from the accuracy radius `α` used in [`crate::analysis`].

use std::fmt;

use crate::error::{Error, Result};
use crate::estimators::CountTable;
use crate::numerics::gaussian_quantile;

/// Estimated proportions of the two groups, with the variance of the
/// additive noise on each count (`0` for non-private counts).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionPair {
    pub p_x: f64,
    pub p_y: f64,
    pub n_x: u64,
    pub n_y: u64,
    pub noise_variance: f64,
}

impl ProportionPair {
    /// From (possibly noised and clamped) counts: `p_x = X̃/n_x`, `p_y = Ỹ/n_y`.
    pub fn from_counts(x: f64, y: f64, n_x: u64, n_y: u64, noise_variance: f64) -> Result<Self> {
        if n_x == 0 || n_y == 0 {
            return Err(Error::Domain("group sizes must be positive".into()));
        }
        if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
            return Err(Error::Domain(format!(
                "noise variance must be finite and nonnegative, got {noise_variance}"
            )));
        }
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::Domain("counts must be finite".into()));
        }
        Ok(Self {
            p_x: x / n_x as f64,
            p_y: y / n_y as f64,
            n_x,
            n_y,
            noise_variance,
        })
    }

    /// Non-private proportions of a count table.
    pub fn from_table(t: &CountTable) -> Self {
        Self {
            p_x: t.x() as f64 / t.n_x() as f64,
            p_y: t.y() as f64 / t.n_y() as f64,
            n_x: t.n_x(),
            n_y: t.n_y(),
            noise_variance: 0.0,
        }
    }

    pub fn x(&self) -> f64 {
        self.p_x * self.n_x as f64
    }

    pub fn y(&self) -> f64 {
        self.p_y * self.n_y as f64
    }

    /// Point estimate `p̃ = p_x / p_y`.
    pub fn ratio(&self) -> f64 {
        self.p_x / self.p_y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CiMethod {
    Classic,
    PrivateAsymptotic,
    ConservativeGaussian,
    ConservativeLaplace,
}

impl CiMethod {
    pub fn name(self) -> &'static str {
        match self {
            CiMethod::Classic => "classic",
            CiMethod::PrivateAsymptotic => "asymptotic",
            CiMethod::ConservativeGaussian => "conservative-gaussian",
            CiMethod::ConservativeLaplace => "conservative-laplace",
        }
    }
}

impl fmt::Display for CiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: CiMethod,
}

impl ConfidenceInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    /// The same interval with a negative lower end raised to 0.
    pub fn truncated_at_zero(self) -> Self {
        Self {
            lower: self.lower.max(0.0),
            ..self
        }
    }
}

/// Two-sided normal quantile `Φ⁻¹(1 − (1 − level)/2)`.
pub fn normal_critical_value(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("level must lie in (0, 1), got {level}")));
    }
    gaussian_quantile(0.5 + level / 2.0)
}

fn nonnegative_radicand(v: f64) -> Result<f64> {
    if v < 0.0 {
        return Err(Error::DegenerateData(format!(
            "variance estimate is negative ({v}); noised counts exceed group sizes"
        )));
    }
    Ok(v)
}

/// Katz log interval `exp(ln T ± z·√(1/X − 1/n_x + 1/Y − 1/n_y))`
/// around `T = (X/n_x)/(Y/n_y)`.
pub fn classic_ci(t: &CountTable, level: f64) -> Result<ConfidenceInterval> {
    if t.x() == 0 || t.y() == 0 {
        return Err(Error::Domain("classic interval needs X >= 1 and Y >= 1 (log of zero)".into()));
    }
    let z = normal_critical_value(level)?;
    let (x, y) = (t.x() as f64, t.y() as f64);
    let var = nonnegative_radicand(1.0 / x - 1.0 / t.n_x() as f64 + 1.0 / y - 1.0 / t.n_y() as f64)?;
    let log_t = t.relative_risk().ln();
    let half = z * var.sqrt();
    Ok(ConfidenceInterval {
        lower: (log_t - half).exp(),
        upper: (log_t + half).exp(),
        level,
        method: CiMethod::Classic,
    })
}

fn wald(pp: &ProportionPair, level: f64, extra: f64, method: CiMethod) -> Result<ConfidenceInterval> {
    let (x, y) = (pp.x(), pp.y());
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!(
            "noised counts must be positive (clamp them at 1 first), got x={x}, y={y}"
        )));
    }
    let z = normal_critical_value(level)?;
    let rad = nonnegative_radicand(
        1.0 / x - 1.0 / pp.n_x as f64 + 1.0 / y - 1.0 / pp.n_y as f64 + extra,
    )?;
    let p = pp.ratio();
    let half = z * p * rad.sqrt();
    Ok(ConfidenceInterval {
        lower: p - half,
        upper: p + half,
        level,
        method,
    })
}

/// Asymptotic interval `p̃ ± z·Ṽ`, `Ṽ = p̃·√(1/X̃ − 1/n_x + 1/Ỹ − 1/n_y)`.
/// Ignores `noise_variance`.
pub fn private_asymptotic_ci(pp: &ProportionPair, level: f64) -> Result<ConfidenceInterval> {
    wald(pp, level, 0.0, CiMethod::PrivateAsymptotic)
}

/// Conservative interval: adds `σ²(1/X̃² + 1/Ỹ²)` under the root. For Laplace
/// noise plug in `σ² = 2b²`; the method tag records which.
pub fn conservative_ci(pp: &ProportionPair, level: f64, laplace: bool) -> Result<ConfidenceInterval> {
    let (x, y) = (pp.x(), pp.y());
    let extra = pp.noise_variance * (1.0 / (x * x) + 1.0 / (y * y));
    let method = if laplace {
        CiMethod::ConservativeLaplace
    } else {
        CiMethod::ConservativeGaussian
    };
    wald(pp, level, extra, method)
}
