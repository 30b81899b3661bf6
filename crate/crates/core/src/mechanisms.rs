//! Noise calibration: privacy budgets, global sensitivity, the Laplace
//! mechanism and the Gaussian mechanism under the classical and the tight
//! (analytic) calibration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{gaussian_cdf, GaussianDist, LaplaceDist, NoiseSource};

/// An `(ε, δ)` differential-privacy budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyBudget {
    epsilon: f64,
    delta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidBudget(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidBudget(format!(
                "delta must lie in [0, 1), got {delta}"
            )));
        }
        Ok(Self { epsilon, delta })
    }

    /// A pure `(ε, 0)` budget.
    pub fn pure(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn is_pure(&self) -> bool {
        self.delta == 0.0
    }

    /// Fails unless `δ = 0`.
    pub fn require_pure(&self, what: &str) -> Result<()> {
        if self.is_pure() {
            Ok(())
        } else {
            Err(Error::InvalidBudget(format!(
                "{what} is pure differential privacy and needs delta = 0, got {}",
                self.delta
            )))
        }
    }

    /// Fails unless `0 < δ < 1`.
    pub fn require_approximate(&self, what: &str) -> Result<()> {
        if self.delta > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidBudget(format!("{what} requires delta > 0")))
        }
    }
}

impl fmt::Display for PrivacyBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(epsilon={}, delta={})", self.epsilon, self.delta)
    }
}

/// Global sensitivity `Δ_f` of a query.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Sensitivity(f64);

impl Sensitivity {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::Domain(format!(
                "sensitivity must be finite and nonnegative, got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Laplace scale `b = Δ / ε`.
pub fn laplace_scale(budget: PrivacyBudget, s: Sensitivity) -> Result<f64> {
    if s.0 == 0.0 {
        return Err(Error::DegenerateScale);
    }
    Ok(s.0 / budget.epsilon)
}

/// Zero-mean Laplace noise calibrated to `(ε, 0)`.
pub fn laplace_mechanism(budget: PrivacyBudget, s: Sensitivity) -> Result<LaplaceDist> {
    LaplaceDist::centered(laplace_scale(budget, s)?)
}

/// Classical Gaussian calibration `σ² = 2 ln(1.25/δ) Δ² / ε²`, valid for `ε < 1`.
pub fn calibrate_gaussian_dwork(budget: PrivacyBudget, s: Sensitivity) -> Result<GaussianDist> {
    if budget.epsilon >= 1.0 {
        return Err(Error::OutOfValidity(format!(
            "the classical Gaussian calibration only covers epsilon < 1, got {}",
            budget.epsilon
        )));
    }
    budget.require_approximate("the Gaussian mechanism")?;
    if s.0 == 0.0 {
        return Err(Error::DegenerateScale);
    }
    GaussianDist::centered(dwork_sigma(budget.epsilon, budget.delta, s.0))
}

fn dwork_sigma(epsilon: f64, delta: f64, sensitivity: f64) -> f64 {
    (2.0 * (1.25 / delta).ln()).sqrt() * sensitivity / epsilon
}

/// The privacy loss `δ(σ)` of the Gaussian mechanism:
/// `Φ(Δ/2σ − εσ/Δ) − e^ε Φ(−Δ/2σ − εσ/Δ)`.
///
/// The mechanism is `(ε, δ)`-DP exactly when this is at most `δ`.
pub fn balle_delta(epsilon: f64, sigma: f64, sensitivity: f64) -> f64 {
    let a = sensitivity / (2.0 * sigma);
    let c = epsilon * sigma / sensitivity;
    gaussian_cdf(a - c) - epsilon.exp() * gaussian_cdf(-a - c)
}

pub const DEFAULT_BALLE_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200;

/// Smallest `σ` (to relative tolerance `tol`) with `balle_delta(ε, σ, Δ) ≤ δ`.
///
/// Bracket and bisect. The returned value is the feasible end of the final
/// bracket, so it satisfies the inequality and `σ·(1 − 10·tol)` does not.
pub fn calibrate_gaussian_balle(
    budget: PrivacyBudget,
    s: Sensitivity,
    tol: f64,
) -> Result<GaussianDist> {
    budget.require_approximate("the Gaussian mechanism")?;
    if s.0 == 0.0 {
        return Err(Error::DegenerateScale);
    }
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 0.1), got {tol}")));
    }
    let (eps, delta, d) = (budget.epsilon, budget.delta, s.0);
    let feasible = |sigma: f64| balle_delta(eps, sigma, d) <= delta;

    let mut lo = d / (2.0 * eps) * 1e-3;
    let mut hi = if eps < 1.0 {
        dwork_sigma(eps, delta, d)
    } else {
        d * (1.0 + (2.0 * (1.25 / delta).ln()).sqrt()) / eps
    };
    let mut steps = 0;
    while !feasible(hi) {
        hi *= 2.0;
        steps += 1;
        if steps > MAX_ITERATIONS {
            return Err(Error::NonConvergence("no feasible sigma found".into()));
        }
    }
    while feasible(lo) {
        lo *= 0.5;
        steps += 1;
        if steps > MAX_ITERATIONS || lo == 0.0 {
            return Err(Error::NonConvergence("no infeasible sigma found".into()));
        }
    }
    if balle_delta(eps, lo, d) <= balle_delta(eps, hi, d) {
        return Err(Error::InternalConsistency(
            "privacy loss is not decreasing over the bracket".into(),
        ));
    }
    for _ in 0..MAX_ITERATIONS {
        if hi - lo <= tol * hi {
            return GaussianDist::centered(hi);
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NonConvergence(format!(
        "bisection did not reach relative width {tol} in {MAX_ITERATIONS} steps"
    )))
}

/// Which Gaussian calibration to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaussianCalibration {
    #[default]
    Balle,
    Dwork,
}

impl GaussianCalibration {
    pub fn calibrate(self, budget: PrivacyBudget, s: Sensitivity) -> Result<GaussianDist> {
        match self {
            GaussianCalibration::Balle => calibrate_gaussian_balle(budget, s, DEFAULT_BALLE_TOL),
            GaussianCalibration::Dwork => calibrate_gaussian_dwork(budget, s),
        }
    }
}

/// A zero-mean additive noise law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    Laplace(LaplaceDist),
    Gaussian(GaussianDist),
}

impl Noise {
    pub fn variance(&self) -> f64 {
        match self {
            Noise::Laplace(d) => d.variance(),
            Noise::Gaussian(d) => d.variance(),
        }
    }

    fn location(&self) -> f64 {
        match self {
            Noise::Laplace(d) => d.mu(),
            Noise::Gaussian(d) => d.mu(),
        }
    }
}

/// `value` plus one variate of `noise`.
pub fn apply_noise<N: NoiseSource + ?Sized>(rng: &mut N, value: f64, noise: &Noise) -> Result<f64> {
    if noise.location() != 0.0 {
        return Err(Error::Precondition("additive noise must be centered".into()));
    }
    Ok(value
        + match noise {
            Noise::Laplace(d) => rng.laplace(d),
            Noise::Gaussian(d) => rng.gaussian(d),
        })
}
