//! Private estimators of the ratio `Z = X / Y` of two counts.
//!
//! Each estimator takes its noise from a [`NoiseSource`], so the same code
//! runs against a seeded [`RngHandle`](crate::numerics::RngHandle) or a
//! [`ScriptedNoise`](crate::numerics::ScriptedNoise) in tests.

mod ptr;
mod sensitivity;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mechanisms::{laplace_mechanism, PrivacyBudget, Sensitivity};
use crate::numerics::NoiseSource;

pub use ptr::{propose_test_release, ptr_distance_to_unsafe, PtrOutcome, PtrRelease};
pub use sensitivity::{
    local_sensitivity_ratio, max_ls_at_distance, smooth_sensitivity_beta,
    smooth_sensitivity_estimate, smooth_sensitivity_ratio,
};

/// Two counts and their group sizes: `X` successes out of `n_x`, `Y` out of `n_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CountTable {
    x: u64,
    y: u64,
    n_x: u64,
    n_y: u64,
}

impl CountTable {
    pub fn new(x: u64, y: u64, n_x: u64, n_y: u64) -> Result<Self> {
        if n_x == 0 || n_y == 0 {
            return Err(Error::InvalidTable("group sizes must be positive".into()));
        }
        if x > n_x || y > n_y {
            return Err(Error::InvalidTable(format!(
                "counts exceed group sizes: x={x}/{n_x}, y={y}/{n_y}"
            )));
        }
        Ok(Self { x, y, n_x, n_y })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn n_x(&self) -> u64 {
        self.n_x
    }

    pub fn n_y(&self) -> u64 {
        self.n_y
    }

    /// Total number of records `n = n_x + n_y`.
    pub fn n(&self) -> u64 {
        self.n_x + self.n_y
    }

    /// The exact ratio `X / Y`.
    pub fn ratio(&self) -> f64 {
        self.x as f64 / self.y as f64
    }

    /// Relative risk `(X/n_x) / (Y/n_y)`.
    pub fn relative_risk(&self) -> f64 {
        (self.x as f64 / self.n_x as f64) / (self.y as f64 / self.n_y as f64)
    }

    /// Estimators are only defined for strictly positive counts.
    pub fn require_positive(&self) -> Result<()> {
        if self.x == 0 || self.y == 0 {
            return Err(Error::InvalidTable(format!(
                "estimators require x >= 1 and y >= 1, got x={}, y={}",
                self.x, self.y
            )));
        }
        Ok(())
    }
}

/// Which estimator produced a [`RatioEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    NoisedCounts,
    NoisedCountsMaxed,
    Naive,
    NoisedLog,
    NoisedLogDebiased,
    SmoothSens,
    Ptr,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::NoisedCounts,
        Method::NoisedCountsMaxed,
        Method::Naive,
        Method::NoisedLog,
        Method::NoisedLogDebiased,
        Method::SmoothSens,
        Method::Ptr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::NoisedCounts => "noised-counts",
            Method::NoisedCountsMaxed => "noised-counts-maxed",
            Method::Naive => "naive",
            Method::NoisedLog => "noised-log",
            Method::NoisedLogDebiased => "noised-log-debiased",
            Method::SmoothSens => "smooth-sens",
            Method::Ptr => "ptr",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown estimator `{s}`")))
    }
}

/// A privatized ratio.
///
/// `x_tilde`/`y_tilde` are present only for the noised-counts methods; the
/// other estimators release nothing but the ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub x_tilde: Option<f64>,
    pub y_tilde: Option<f64>,
    pub value: f64,
    pub method: Method,
    pub budget_spent: PrivacyBudget,
}

fn unit() -> Sensitivity {
    Sensitivity::new(1.0).expect("1 is a valid sensitivity")
}

/// `X̃ = X + Lap(2/ε)`, `Ỹ = Y + Lap(2/ε)` and their ratio.
///
/// Each count gets half the budget. With `max_denominator` the ratio is
/// `X̃ / max(Ỹ, 1)`, which has finite moments; without it `X̃ / Ỹ`.
pub fn laplace_noised_counts<N: NoiseSource + ?Sized>(
    rng: &mut N,
    t: &CountTable,
    budget: PrivacyBudget,
    max_denominator: bool,
) -> Result<RatioEstimate> {
    budget.require_pure("LaplaceNoisedCounts")?;
    t.require_positive()?;
    let half = PrivacyBudget::pure(budget.epsilon() / 2.0)?;
    let lap = laplace_mechanism(half, unit())?;
    let x_tilde = t.x as f64 + rng.laplace(&lap);
    let y_tilde = t.y as f64 + rng.laplace(&lap);
    let (value, method) = if max_denominator {
        (x_tilde / y_tilde.max(1.0), Method::NoisedCountsMaxed)
    } else {
        (x_tilde / y_tilde, Method::NoisedCounts)
    };
    Ok(RatioEstimate {
        x_tilde: Some(x_tilde),
        y_tilde: Some(y_tilde),
        value,
        method,
        budget_spent: budget,
    })
}

/// `X/Y + Lap(n_x / 2ε)`: the ratio's global sensitivity is `n_x / 2`.
pub fn naive_relative_risk<N: NoiseSource + ?Sized>(
    rng: &mut N,
    t: &CountTable,
    budget: PrivacyBudget,
) -> Result<RatioEstimate> {
    budget.require_pure("NaiveRelativeRisk")?;
    t.require_positive()?;
    let lap = laplace_mechanism(budget, Sensitivity::new(t.n_x as f64 / 2.0)?)?;
    Ok(RatioEstimate {
        x_tilde: None,
        y_tilde: None,
        value: t.ratio() + rng.laplace(&lap),
        method: Method::Naive,
        budget_spent: budget,
    })
}

/// Multiplicative factor `1 − (ln 2 / ε)²` that makes the noised-log
/// estimator unbiased. Needs `ε > ln 2`.
pub fn noised_log_debias_factor(epsilon: f64) -> Result<f64> {
    if epsilon <= std::f64::consts::LN_2 {
        return Err(Error::InvalidDebias { epsilon });
    }
    let b = std::f64::consts::LN_2 / epsilon;
    Ok(1.0 - b * b)
}

/// `(X/Y) · exp(Lap(ln 2 / ε))`, optionally debiased.
///
/// `ln X − ln Y` has global sensitivity `ln 2` on strictly positive counts.
pub fn noised_log<N: NoiseSource + ?Sized>(
    rng: &mut N,
    t: &CountTable,
    budget: PrivacyBudget,
    debias: bool,
) -> Result<RatioEstimate> {
    budget.require_pure("NoisedLog")?;
    t.require_positive()?;
    let factor = if debias {
        noised_log_debias_factor(budget.epsilon())?
    } else {
        1.0
    };
    let lap = laplace_mechanism(budget, Sensitivity::new(std::f64::consts::LN_2)?)?;
    let value = t.ratio() * rng.laplace(&lap).exp() * factor;
    Ok(RatioEstimate {
        x_tilde: None,
        y_tilde: None,
        value,
        method: if debias {
            Method::NoisedLogDebiased
        } else {
            Method::NoisedLog
        },
        budget_spent: budget,
    })
}

/// Runs any estimator by name. `proposal` is only used by PTR; a PTR
/// failure is returned as `Ok(None)`.
pub fn estimate<N: NoiseSource + ?Sized>(
    rng: &mut N,
    method: Method,
    t: &CountTable,
    budget: PrivacyBudget,
    proposal: Option<f64>,
) -> Result<Option<RatioEstimate>> {
    let est = match method {
        Method::NoisedCounts => laplace_noised_counts(rng, t, budget, false)?,
        Method::NoisedCountsMaxed => laplace_noised_counts(rng, t, budget, true)?,
        Method::Naive => naive_relative_risk(rng, t, budget)?,
        Method::NoisedLog => noised_log(rng, t, budget, false)?,
        Method::NoisedLogDebiased => noised_log(rng, t, budget, true)?,
        Method::SmoothSens => smooth_sensitivity_estimate(rng, t, budget)?,
        Method::Ptr => {
            let proposal = proposal
                .ok_or_else(|| Error::Precondition("ptr needs a proposed sensitivity bound".into()))?;
            return Ok(match propose_test_release(rng, t, budget, proposal)?.release {
                PtrRelease::Released(e) => Some(e),
                PtrRelease::Fail => None,
            });
        }
    };
    Ok(Some(est))
}
