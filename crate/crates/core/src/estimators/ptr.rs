//! Propose-test-release for the ratio.

use super::sensitivity::max_ls_at_distance;
use super::{CountTable, Method, RatioEstimate};
use crate::error::{Error, Result};
use crate::mechanisms::PrivacyBudget;
use crate::numerics::{LaplaceDist, NoiseSource};

/// Outcome of one PTR run. `gamma` is the true distance and is kept for
/// diagnostics only; it is not private.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtrOutcome {
    pub gamma: u64,
    pub gamma_hat: f64,
    pub threshold: f64,
    pub release: PtrRelease,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PtrRelease {
    Released(RatioEstimate),
    Fail,
}

impl PtrOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self.release, PtrRelease::Fail)
    }

    pub fn estimate(&self) -> Option<&RatioEstimate> {
        match &self.release {
            PtrRelease::Released(e) => Some(e),
            PtrRelease::Fail => None,
        }
    }
}

/// Distance to the nearest table whose local sensitivity reaches `proposed`,
/// or `n` when no table within distance `n` does. Linear scan.
pub fn ptr_distance_to_unsafe(t: &CountTable, proposed: f64) -> Result<u64> {
    if !(proposed > 0.0 && proposed.is_finite()) {
        return Err(Error::Domain(format!(
            "proposed sensitivity bound must be positive, got {proposed}"
        )));
    }
    Ok((0..=t.n())
        .find(|&m| max_ls_at_distance(t, m) >= proposed)
        .unwrap_or(t.n()))
}

/// Splits `ε` evenly: `γ̂ = γ + Lap(1/ε₁)`; FAIL if `γ̂ ≤ ln(1/δ)/ε₁`,
/// otherwise release `X/Y + Lap(proposed/ε₂)`.
pub fn propose_test_release<N: NoiseSource + ?Sized>(
    rng: &mut N,
    t: &CountTable,
    budget: PrivacyBudget,
    proposed: f64,
) -> Result<PtrOutcome> {
    budget.require_approximate("propose-test-release")?;
    t.require_positive()?;
    let eps1 = budget.epsilon() / 2.0;
    let eps2 = budget.epsilon() / 2.0;
    let gamma = ptr_distance_to_unsafe(t, proposed)?;
    let gamma_hat = gamma as f64 + rng.laplace(&LaplaceDist::centered(1.0 / eps1)?);
    let threshold = (1.0 / budget.delta()).ln() / eps1;
    let release = if gamma_hat <= threshold {
        PtrRelease::Fail
    } else {
        let noise = LaplaceDist::centered(proposed / eps2)?;
        PtrRelease::Released(RatioEstimate {
            x_tilde: None,
            y_tilde: None,
            value: t.ratio() + rng.laplace(&noise),
            method: Method::Ptr,
            budget_spent: budget,
        })
    };
    Ok(PtrOutcome {
        gamma,
        gamma_hat,
        threshold,
        release,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::local_sensitivity_ratio;
    use crate::numerics::{RngHandle, ScriptedNoise};

    fn table(x: u64, y: u64) -> CountTable {
        CountTable::new(x, y, 150, 150).unwrap()
    }

    #[test]
    fn distance_examples() {
        let t = table(100, 50);
        let ls = local_sensitivity_ratio(&t).unwrap();
        assert_eq!(ptr_distance_to_unsafe(&t, ls).unwrap(), 0);
        assert_eq!(ptr_distance_to_unsafe(&t, ls / 2.0).unwrap(), 0);
        assert_eq!(ptr_distance_to_unsafe(&t, 0.1).unwrap(), 18);
        let small = CountTable::new(3, 4, 5, 5).unwrap();
        assert_eq!(ptr_distance_to_unsafe(&small, 1e9).unwrap(), 10);
        assert!(ptr_distance_to_unsafe(&t, 0.0).is_err());
    }

    #[test]
    fn fail_and_release_branches() {
        let b = PrivacyBudget::new(1.0, 1.0 / 150.0).unwrap();
        let t = table(100, 50);
        // proposal at the local sensitivity: gamma = 0 is below any positive threshold
        let ls = local_sensitivity_ratio(&t).unwrap();
        let mut s = ScriptedNoise::zeros();
        let out = propose_test_release(&mut s, &t, b, ls).unwrap();
        assert_eq!(out.gamma, 0);
        assert!(out.is_fail());
        assert_eq!(s.draws(), 1);
        assert!((out.threshold - 150f64.ln() / 0.5).abs() < 1e-12);

        let mut s = ScriptedNoise::zeros();
        let out = propose_test_release(&mut s, &t, b, 1e9).unwrap();
        assert_eq!(out.gamma, 300);
        assert_eq!(out.estimate().unwrap().value, 2.0);
        assert_eq!(s.draws(), 2);

        // release noise is Lap(proposed / ε₂): a scripted deviation passes straight through
        let mut s = ScriptedNoise::new([0.0, 0.25]);
        let out = propose_test_release(&mut s, &t, b, 1e9).unwrap();
        assert_eq!(out.estimate().unwrap().value, 2.25);
        assert!(propose_test_release(&mut s, &t, PrivacyBudget::pure(1.0).unwrap(), 0.1).is_err());
    }

    #[test]
    fn failure_probability_matches_laplace_cdf() {
        let b = PrivacyBudget::new(1.0, 1.0 / 150.0).unwrap();
        let t = table(100, 50);
        let out = propose_test_release(&mut ScriptedNoise::zeros(), &t, b, 0.1).unwrap();
        let expected = LaplaceDist::new(out.gamma as f64, 2.0).unwrap().cdf(out.threshold);
        let mut rng = RngHandle::new(3, 9);
        let n = 1_000_000;
        let fails = (0..n)
            .filter(|_| propose_test_release(&mut rng, &t, b, 0.1).unwrap().is_fail())
            .count();
        assert!((fails as f64 / n as f64 - expected).abs() < 0.005, "{expected}");
    }
}
