//! Closed-form finite-sample analysis of the private ratio estimators:
//! the ratio-of-Laplace CDF, `(α, β)` sample-accuracy bounds, and the exact
//! and approximate expectation of the maxed noisy ratio.

use std::f64::consts::LN_2;

use crate::error::{clamp_probability, Error, Result};
use crate::estimators::{local_sensitivity_ratio, ptr_distance_to_unsafe, smooth_sensitivity_ratio, CountTable};
use crate::mechanisms::PrivacyBudget;
use crate::numerics::{ei, quad, LaplaceDist};

/// `P(|Z̃ − Z| > α) ≤ β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyBound {
    pub alpha: f64,
    pub beta: f64,
}

impl AccuracyBound {
    fn new(alpha: f64, beta: f64, what: &str) -> Result<Self> {
        Ok(Self {
            alpha,
            beta: clamp_probability(beta, what)?,
        })
    }

    /// `1 − β`, the probability of landing within `α`.
    pub fn accuracy(&self) -> f64 {
        1.0 - self.beta
    }
}

/// Parameters of `X₁ ~ Lap(μ₁, b)` and `X₂ ~ Lap(μ₂, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioLawParams {
    pub mu1: f64,
    pub mu2: f64,
    pub b: f64,
}

impl RatioLawParams {
    pub fn new(mu1: f64, mu2: f64, b: f64) -> Result<Self> {
        if !(mu1 > 0.0 && mu2 > 0.0 && mu1.is_finite() && mu2.is_finite()) {
            return Err(Error::Domain(format!(
                "ratio CDF needs positive locations, got mu1={mu1}, mu2={mu2}"
            )));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("Laplace scale must be positive, got {b}")));
        }
        Ok(Self { mu1, mu2, b })
    }

    /// The law of the noised counts: `μ₁ = X`, `μ₂ = Y`, `b = 2/ε`.
    pub fn noised_counts(t: &CountTable, epsilon: f64) -> Result<Self> {
        Self::new(t.x() as f64, t.y() as f64, 2.0 / epsilon)
    }
}

const SINGULAR_GAP: f64 = 1e-9;

/// `P(X₁/X₂ < a)` in closed form.
///
/// Exactly, the expression is `P(X₁ < a·X₂)`; the two differ only by the
/// probability that `X₂ < 0`, which is `½e^{−μ₂/b}`. The formula has a
/// removable pole at `a = 1` and is rejected within `1e-9` of it; see
/// [`ratio_of_laplace_cdf_bridged`].
pub fn ratio_of_laplace_cdf(p: &RatioLawParams, a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("threshold must be positive, got {a}")));
    }
    if (a - 1.0).abs() < SINGULAR_GAP {
        return Err(Error::Singularity(format!(
            "ratio CDF has a removable pole at a = 1 (got {a})"
        )));
    }
    let (m1, m2, b) = (p.mu1, p.mu2, p.b);
    let k = 2.0 * (a + 1.0) * (a - 1.0);
    let value = if m1 / a >= m2 {
        -((m2 * a - m1) / b).exp() / k + a * a * ((m2 - m1 / a) / b).exp() / k
    } else {
        1.0 - ((m1 / a - m2) / b).exp() * a * a / k + ((m1 - a * m2) / b).exp() / k
    };
    clamp_probability(value, "ratio-of-Laplace CDF")
}

const BRIDGE: f64 = 1e-6;

/// [`ratio_of_laplace_cdf`] made usable at every `a > 0`: inside
/// `1 ± 1e-6` the CDF is interpolated linearly between the two ends.
pub fn ratio_of_laplace_cdf_bridged(p: &RatioLawParams, a: f64) -> Result<f64> {
    if (a - 1.0).abs() >= BRIDGE {
        return ratio_of_laplace_cdf(p, a);
    }
    let lo = ratio_of_laplace_cdf(p, 1.0 - BRIDGE)?;
    let hi = ratio_of_laplace_cdf(p, 1.0 + BRIDGE)?;
    let w = (a - (1.0 - BRIDGE)) / (2.0 * BRIDGE);
    Ok(lo + w * (hi - lo))
}

fn require_alpha_below_ratio(alpha: f64, z: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < z) {
        return Err(Error::Precondition(format!(
            "accuracy radius must satisfy 0 < alpha < Z = {z}, got {alpha}"
        )));
    }
    Ok(())
}

/// Sample accuracy of `X̃/Ỹ` with `Lap(2/ε)` noise on each count:
///
/// `β = (½ + ½/((Z−α)²−1))·e^{−εαY/(2(Z−α))} + (½ + ½/((Z+α)²−1))·e^{−εαY/(2(Z+α))}
///     − (Z²+α²−1)/((Z²+α²−1)² − 4α²Z²)·e^{−εαY/2}`.
pub fn noised_counts_accuracy(t: &CountTable, budget: PrivacyBudget, alpha: f64) -> Result<AccuracyBound> {
    t.require_positive()?;
    let z = t.ratio();
    require_alpha_below_ratio(alpha, z)?;
    let (lo, hi) = (z - alpha, z + alpha);
    if (lo - 1.0).abs() < SINGULAR_GAP || (hi - 1.0).abs() < SINGULAR_GAP {
        return Err(Error::Singularity(format!(
            "accuracy bound is singular when Z ± alpha = 1 (Z = {z}, alpha = {alpha})"
        )));
    }
    let s = z * z + alpha * alpha - 1.0;
    let third_den = s * s - 4.0 * alpha * alpha * z * z;
    if third_den.abs() < SINGULAR_GAP {
        return Err(Error::Singularity("accuracy bound denominator vanishes".into()));
    }
    let ey = budget.epsilon() * alpha * t.y() as f64;
    let beta = (0.5 + 0.5 / (lo * lo - 1.0)) * (-ey / (2.0 * lo)).exp()
        + (0.5 + 0.5 / (hi * hi - 1.0)) * (-ey / (2.0 * hi)).exp()
        - s / third_den * (-ey / 2.0).exp();
    AccuracyBound::new(alpha, beta, "noised-counts accuracy")
}

/// `β = ½(α/Z + 1)^{−ε/ln 2} + ½(1 − α/Z)^{ε/ln 2}`; depends on `X, Y` only through `Z`.
pub fn noised_log_accuracy(t: &CountTable, budget: PrivacyBudget, alpha: f64) -> Result<AccuracyBound> {
    t.require_positive()?;
    let z = t.ratio();
    require_alpha_below_ratio(alpha, z)?;
    let k = budget.epsilon() / LN_2;
    let r = alpha / z;
    let beta = 0.5 * (r + 1.0).powf(-k) + 0.5 * (1.0 - r).powf(k);
    AccuracyBound::new(alpha, beta, "noised-log accuracy")
}

/// `β = exp(−2αε / n_x)`.
pub fn naive_accuracy(t: &CountTable, budget: PrivacyBudget, alpha: f64) -> Result<AccuracyBound> {
    if !(alpha > 0.0) {
        return Err(Error::Precondition(format!("alpha must be positive, got {alpha}")));
    }
    let beta = (-2.0 * alpha * budget.epsilon() / t.n_x() as f64).exp();
    AccuracyBound::new(alpha, beta, "naive accuracy")
}

/// `β = exp(−αε / (2S*))`: the Laplace tail at scale `2S*/ε`.
pub fn smooth_sens_accuracy(t: &CountTable, budget: PrivacyBudget, alpha: f64) -> Result<AccuracyBound> {
    if !(alpha > 0.0) {
        return Err(Error::Precondition(format!("alpha must be positive, got {alpha}")));
    }
    let s_star = smooth_sensitivity_ratio(t, budget)?;
    let beta = (-alpha * budget.epsilon() / (2.0 * s_star)).exp();
    AccuracyBound::new(alpha, beta, "smooth-sensitivity accuracy")
}

/// Accuracy of propose-test-release with a given proposal, counting FAIL as
/// an error: `1 − β = P(γ̂ > threshold) · (1 − exp(−α ε₂ / proposal))`.
pub fn ptr_accuracy(
    t: &CountTable,
    budget: PrivacyBudget,
    alpha: f64,
    proposal: f64,
) -> Result<AccuracyBound> {
    budget.require_approximate("propose-test-release")?;
    if !(alpha > 0.0) {
        return Err(Error::Precondition(format!("alpha must be positive, got {alpha}")));
    }
    let eps1 = budget.epsilon() / 2.0;
    let eps2 = budget.epsilon() / 2.0;
    let gamma = ptr_distance_to_unsafe(t, proposal)? as f64;
    let threshold = (1.0 / budget.delta()).ln() / eps1;
    let pass = 1.0 - LaplaceDist::new(gamma, 1.0 / eps1)?.cdf(threshold);
    let within = 1.0 - (-alpha * eps2 / proposal).exp();
    AccuracyBound::new(alpha, 1.0 - pass * within, "ptr accuracy")
}

/// Proposal grid `LS · 2^{k/4}`, `k = −8..=24`; contains the true local sensitivity.
pub fn ptr_proposal_grid(t: &CountTable) -> Result<Vec<f64>> {
    let ls = local_sensitivity_ratio(t)?;
    Ok((-8..=24).map(|k| ls * 2f64.powf(k as f64 / 4.0)).collect())
}

/// The proposal on [`ptr_proposal_grid`] with the best accuracy, as an
/// analyst with oracle access to the local sensitivity would choose it.
pub fn ptr_best_proposal(t: &CountTable, budget: PrivacyBudget, alpha: f64) -> Result<(f64, AccuracyBound)> {
    let mut best: Option<(f64, AccuracyBound)> = None;
    for proposal in ptr_proposal_grid(t)? {
        let bound = ptr_accuracy(t, budget, alpha, proposal)?;
        if best.is_none_or(|(_, b)| bound.beta < b.beta) {
            best = Some((proposal, bound));
        }
    }
    Ok(best.expect("proposal grid is not empty"))
}

/// Expectation of the maxed ratio `X̃ / max(Ỹ, 1)` next to the true ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasReport {
    pub expectation: f64,
    pub ratio: f64,
}

impl BiasReport {
    pub fn bias(&self) -> f64 {
        self.expectation - self.ratio
    }

    pub fn relative_bias(&self) -> f64 {
        self.bias() / self.ratio
    }
}

/// Largest `εY/2` at which `e^{εY/2}` and `Ei(εY/2)` stay finite.
const MAX_HALF_EPS_Y: f64 = 700.0;

/// Exact `E[X̃ / max(Ỹ, 1)]` with `c = εY/2`:
///
/// `X·(½e^{ε(1−Y)/2} + (ε/4)e^{−c}(Ei(c) − Ei(ε/2)) − (ε/4)e^{c}Ei(−c))`.
pub fn noised_counts_bias_exact(t: &CountTable, budget: PrivacyBudget) -> Result<BiasReport> {
    t.require_positive()?;
    let eps = budget.epsilon();
    let y = t.y() as f64;
    let c = eps * y / 2.0;
    if c > MAX_HALF_EPS_Y {
        return Err(Error::Range(format!(
            "epsilon*Y/2 = {c} is too large for the exact form; use the approximation"
        )));
    }
    let factor = 0.5 * (eps * (1.0 - y) / 2.0).exp()
        + eps / 4.0 * (-c).exp() * (ei(c)? - ei(eps / 2.0)?)
        - eps / 4.0 * c.exp() * ei(-c)?;
    Ok(BiasReport {
        expectation: t.x() as f64 * factor,
        ratio: t.ratio(),
    })
}

/// Integral approximation `Z · c² · PV∫_{−∞}^0 −e^u / (u² − c²) du` with `c = εY/2 > 1`.
///
/// Partial fractions split it into `(c/2)·[∫ e^u/(c−u) du + PV∫ e^u/(u+c) du]`.
/// The principal value around the pole at `u = −c` is taken by pairing
/// `u + c = ±s`, which leaves a smooth integrand on `[0, c]`.
pub fn noised_counts_bias_approx(t: &CountTable, budget: PrivacyBudget) -> Result<BiasReport> {
    t.require_positive()?;
    let c = budget.epsilon() * t.y() as f64 / 2.0;
    if c <= 1.0 {
        return Err(Error::Precondition(format!(
            "the integral approximation needs epsilon*Y/2 > 1, got {c}"
        )));
    }
    if c > MAX_HALF_EPS_Y {
        return Err(Error::Range(format!("epsilon*Y/2 = {c} is out of range")));
    }
    // e^{-60} is below double precision relative to the integrals
    const TAIL: f64 = 60.0;
    const ABS: f64 = 1e-13;
    const REL: f64 = 1e-12;
    let away = quad::integrate(|u| u.exp() / (c - u), -TAIL, 0.0, ABS, REL)?;
    let pole = quad::integrate(
        |s| {
            if s < 1.0 {
                2.0 * (-c).exp() * s.sinh() / s
            } else {
                ((s - c).exp() - (-s - c).exp()) / s
            }
        },
        0.0,
        c,
        ABS,
        REL,
    )?;
    let far = quad::integrate(|u| u.exp() / (u + c), -2.0 * c - TAIL, -2.0 * c, ABS, REL)?;
    Ok(BiasReport {
        expectation: t.ratio() * c / 2.0 * (away + pole + far),
        ratio: t.ratio(),
    })
}

/// `P(Ỹ < 1) = ½ exp(−ε(Y − 1)/2)` for `Ỹ = Y + Lap(2/ε)`.
pub fn prob_denominator_below_one(y: u64, budget: PrivacyBudget) -> Result<f64> {
    if y == 0 {
        return Err(Error::Domain("Y must be at least 1".into()));
    }
    Ok(LaplaceDist::new(y as f64, 2.0 / budget.epsilon())?.cdf(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::laplace_noised_counts;
    use crate::numerics::RngHandle;
    use proptest::prelude::*;

    fn table(x: u64, y: u64) -> CountTable {
        CountTable::new(x, y, 1000, 1000).unwrap()
    }

    fn pure(e: f64) -> PrivacyBudget {
        PrivacyBudget::pure(e).unwrap()
    }

    fn law(m1: f64, m2: f64, b: f64) -> RatioLawParams {
        RatioLawParams::new(m1, m2, b).unwrap()
    }

    // 40-digit evaluation, confirmed by direct quadrature of P(X1 < a X2)
    const CDF_REFERENCE: &[(f64, f64, f64, f64, f64)] = &[
        (100.0, 100.0, 2.0, 1.1, 0.985_460_423_285_937_4),
        (100.0, 100.0, 2.0, 0.9, 0.009_490_925_489_769_73),
        (100.0, 50.0, 2.0, 2.1, 0.815_411_720_917_563_8),
        (100.0, 50.0, 2.0, 1.9, 0.169_797_405_824_264_24),
        (50.0, 100.0, 4.0, 0.45, 0.171_732_947_175_994_75),
    ];

    #[test]
    fn cdf_reference_values() {
        for &(m1, m2, b, a, expected) in CDF_REFERENCE {
            let got = ratio_of_laplace_cdf(&law(m1, m2, b), a).unwrap();
            assert!((got - expected).abs() < 1e-12, "({m1},{m2},{b},{a}): {got}");
        }
        let far = ratio_of_laplace_cdf(&law(100.0, 50.0, 2.0), 1e6).unwrap();
        assert!((far - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cdf_guards() {
        let p = law(100.0, 100.0, 2.0);
        assert!(matches!(ratio_of_laplace_cdf(&p, 1.0), Err(Error::Singularity(_))));
        assert!(matches!(ratio_of_laplace_cdf(&p, 1.0 + 1e-10), Err(Error::Singularity(_))));
        assert!(ratio_of_laplace_cdf(&p, 0.0).is_err());
        assert!(RatioLawParams::new(-1.0, 1.0, 1.0).is_err());
        let mid = ratio_of_laplace_cdf_bridged(&p, 1.0).unwrap();
        let lo = ratio_of_laplace_cdf(&p, 1.0 - 1e-6).unwrap();
        let hi = ratio_of_laplace_cdf(&p, 1.0 + 1e-6).unwrap();
        assert!((mid - 0.5 * (lo + hi)).abs() < 1e-15);
        assert!((mid - 0.5).abs() < 1e-4);
    }

    #[test]
    fn branches_agree_at_switch() {
        let (m1, m2, b) = (100.0f64, 50.0f64, 2.0f64);
        let a = m1 / m2;
        let k = 2.0 * (a + 1.0) * (a - 1.0);
        let first = -((m2 * a - m1) / b).exp() / k + a * a * ((m2 - m1 / a) / b).exp() / k;
        let second = 1.0 - ((m1 / a - m2) / b).exp() * a * a / k + ((m1 - a * m2) / b).exp() / k;
        assert!((first - second).abs() < 1e-10);
        let below = ratio_of_laplace_cdf(&law(m1, m2, b), a * (1.0 - 1e-12)).unwrap();
        let above = ratio_of_laplace_cdf(&law(m1, m2, b), a * (1.0 + 1e-12)).unwrap();
        assert!((below - above).abs() < 1e-10);
    }

    #[test]
    fn cdf_matches_monte_carlo() {
        let p = law(100.0, 100.0, 2.0);
        let lap1 = LaplaceDist::new(100.0, 2.0).unwrap();
        let mut rng = RngHandle::new(21, 0);
        let n = 2_000_000;
        let below = (0..n)
            .filter(|_| rng.sample_laplace(&lap1) / rng.sample_laplace(&lap1) < 1.1)
            .count();
        let mc = below as f64 / n as f64;
        assert!((mc - ratio_of_laplace_cdf(&p, 1.1).unwrap()).abs() < 0.0015, "{mc}");
    }

    // Claim values from the 40-digit closed form
    const BETA_REFERENCE: &[(u64, u64, f64, f64, f64)] = &[
        (100, 100, 1.0, 0.1, 0.024_030_502_203_832_364),
        (100, 50, 0.5, 0.1, 0.617_867_803_537_786_4),
        (50, 100, 2.0, 0.05, 0.009_028_154_862_045_938),
        (100, 100, 2.0, 0.1, 0.000_304_163_051_014_132_3),
        (100, 200, 1.0, 0.1, 6.247_621_160_233_386e-5),
    ];

    #[test]
    fn noised_counts_accuracy_reference() {
        for &(x, y, eps, alpha, expected) in BETA_REFERENCE {
            let beta = noised_counts_accuracy(&table(x, y), pure(eps), alpha).unwrap().beta;
            assert!((beta - expected).abs() < 1e-12 * expected.max(1e-3), "({x},{y}): {beta}");
        }
    }

    #[test]
    fn noised_counts_accuracy_is_the_cdf_identity() {
        for &(x, y, eps, alpha, _) in BETA_REFERENCE {
            let t = table(x, y);
            let z = t.ratio();
            let p = RatioLawParams::noised_counts(&t, eps).unwrap();
            let via_cdf = 1.0
                - (ratio_of_laplace_cdf(&p, z + alpha).unwrap()
                    - ratio_of_laplace_cdf(&p, z - alpha).unwrap());
            let direct = noised_counts_accuracy(&t, pure(eps), alpha).unwrap().beta;
            assert!((via_cdf - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn noised_counts_accuracy_matches_monte_carlo() {
        let t = table(100, 100);
        let mut rng = RngHandle::new(4, 0);
        let n = 1_000_000;
        let misses = (0..n)
            .filter(|_| (laplace_noised_counts(&mut rng, &t, pure(1.0), false).unwrap().value - 1.0).abs() > 0.1)
            .count();
        let beta = noised_counts_accuracy(&t, pure(1.0), 0.1).unwrap().beta;
        assert!((misses as f64 / n as f64 - beta).abs() < 0.003);
    }

    #[test]
    fn noised_counts_accuracy_properties() {
        let b100 = noised_counts_accuracy(&table(100, 100), pure(1.0), 0.1).unwrap().beta;
        let b200 = noised_counts_accuracy(&table(200, 200), pure(1.0), 0.1).unwrap().beta;
        assert!(b200 < b100);
        for eps in [1.1, 1.5, 2.0, 3.0, 4.0] {
            let acc = noised_counts_accuracy(&table(100, 100), pure(eps), 0.1).unwrap();
            assert!(acc.accuracy() > 0.95, "eps={eps}");
        }
        assert!(matches!(
            noised_counts_accuracy(&table(100, 100), pure(1.0), 1.0),
            Err(Error::Precondition(_))
        ));
        // Z - alpha = 1
        assert!(matches!(
            noised_counts_accuracy(&table(110, 100), pure(1.0), 0.1),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn noised_log_accuracy_values() {
        let b = noised_log_accuracy(&table(100, 100), pure(1.0), 0.1).unwrap().beta;
        assert!((b - 0.865_258_451_222_824).abs() < 1e-12, "{b}");
        let b = noised_log_accuracy(&table(200, 100), pure(1.0), 0.1).unwrap().beta;
        assert!((b - 0.930_351_018_756_174_3).abs() < 1e-12, "{b}");
        let small = noised_log_accuracy(&table(100, 50), pure(1.0), 0.1).unwrap().beta;
        let large = noised_log_accuracy(&table(200, 100), pure(1.0), 0.1).unwrap().beta;
        assert_eq!(small, large);
        let eps = 1.0;
        let limit = 0.5 * 2f64.powf(-eps / LN_2);
        let near = noised_log_accuracy(&table(100, 100), pure(eps), 1.0 - 1e-12).unwrap().beta;
        assert!((near - limit).abs() < 1e-9);
    }

    #[test]
    fn naive_accuracy_values() {
        let t = CountTable::new(100, 50, 150, 150).unwrap();
        let b = naive_accuracy(&t, pure(1.0), 0.1).unwrap().beta;
        assert!((b - 0.998_667_555_160_625_5).abs() < 1e-14);
        let wide = CountTable::new(100, 50, 300, 150).unwrap();
        assert!(naive_accuracy(&wide, pure(1.0), 0.1).unwrap().beta > b);
        assert!(naive_accuracy(&t, pure(1.0), 1e6).unwrap().beta < 1e-300);
    }

    #[test]
    fn ptr_best_is_at_least_true_ls() {
        let b = PrivacyBudget::new(1.0, 1.0 / 150.0).unwrap();
        for (x, y) in [(100, 100), (50, 100), (100, 50), (100, 30)] {
            let t = CountTable::new(x, y, 150, 150).unwrap();
            let ls = local_sensitivity_ratio(&t).unwrap();
            assert!(ptr_proposal_grid(&t).unwrap().contains(&ls));
            let (_, best) = ptr_best_proposal(&t, b, 0.1).unwrap();
            let at_ls = ptr_accuracy(&t, b, 0.1, ls).unwrap();
            assert!(best.accuracy() >= at_ls.accuracy());
        }
    }

    #[test]
    fn ptr_accuracy_matches_monte_carlo() {
        use crate::estimators::propose_test_release;
        let b = PrivacyBudget::new(2.0, 1.0 / 150.0).unwrap();
        let t = CountTable::new(100, 100, 150, 150).unwrap();
        let (proposal, bound) = ptr_best_proposal(&t, b, 0.1).unwrap();
        let mut rng = RngHandle::new(8, 8);
        let n = 400_000;
        let hits = (0..n)
            .filter(|_| {
                propose_test_release(&mut rng, &t, b, proposal)
                    .unwrap()
                    .estimate()
                    .is_some_and(|e| (e.value - 1.0).abs() <= 0.1)
            })
            .count();
        assert!((hits as f64 / n as f64 - bound.accuracy()).abs() < 0.005);
    }

    #[test]
    fn bias_exact_reference() {
        // 40-digit evaluation, confirmed by direct integration of E[1/max(Y + L, 1)]
        let cases = [
            (100, 50, 1.0, 2.006_529_408_376_376_7),
            (75, 75, 0.5, 1.005_903_848_463_072_5),
            (100, 20, 1.0, 5.120_985_913_029_918_8),
            (50, 100, 1.0, 0.500_401_943_575_735_7),
        ];
        for (x, y, eps, expected) in cases {
            let r = noised_counts_bias_exact(&table(x, y), pure(eps)).unwrap();
            assert!((r.expectation - expected).abs() < 1e-11 * expected, "({x},{y},{eps}): {}", r.expectation);
        }
        let one = noised_counts_bias_exact(&table(10, 50), pure(1.0)).unwrap().expectation;
        let three = noised_counts_bias_exact(&table(30, 50), pure(1.0)).unwrap().expectation;
        assert!((three / one - 3.0).abs() < 1e-13);
        assert!(matches!(
            noised_counts_bias_exact(&table(100, 1000), pure(2.0)),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn bias_approx_reference() {
        let cases = [
            (100, 50, 1.0, 2.006_529_407_389_213_8),
            (75, 75, 0.5, 1.005_903_465_466_881_2),
            (100, 20, 1.0, 5.117_758_860_329_971_5),
            (100, 30, 0.5, 3.488_515_589_437_857),
        ];
        for (x, y, eps, expected) in cases {
            let r = noised_counts_bias_approx(&table(x, y), pure(eps)).unwrap();
            assert!((r.expectation - expected).abs() < 1e-9 * expected, "({x},{y},{eps}): {}", r.expectation);
        }
        let one = noised_counts_bias_approx(&table(10, 50), pure(1.0)).unwrap().expectation;
        let two = noised_counts_bias_approx(&table(20, 50), pure(1.0)).unwrap().expectation;
        assert!((two / one - 2.0).abs() < 1e-12);
        assert!(noised_counts_bias_approx(&table(10, 2), pure(1.0)).is_err());
    }

    #[test]
    fn bias_approx_large_argument_expansion() {
        for (y, eps) in [(40, 1.0), (100, 0.5), (200, 1.0), (150, 2.0), (500, 1.0)] {
            let t = table(y, y);
            let ey = eps * y as f64;
            let r = noised_counts_bias_approx(&t, pure(eps)).unwrap();
            let excess = r.expectation / r.ratio - 1.0;
            assert!(excess > 0.0 && excess < 16.0 / (ey * ey), "Y={y} eps={eps}: {excess}");
        }
    }

    #[test]
    fn denominator_below_one() {
        assert_eq!(prob_denominator_below_one(1, pure(1.0)).unwrap(), 0.5);
        let p = prob_denominator_below_one(30, pure(1.0)).unwrap();
        assert!((p - 2.521_738_312_839_440_4e-7).abs() < 1e-20);
        assert!(prob_denominator_below_one(31, pure(1.0)).unwrap() < p);
        assert!(prob_denominator_below_one(30, pure(1.1)).unwrap() < p);
    }

    proptest! {
        #[test]
        fn cdf_is_nondecreasing(m1 in 1.0f64..200.0, m2 in 1.0f64..200.0, b in 0.5f64..8.0) {
            let p = law(m1, m2, b);
            let mut prev = 0.0;
            for i in 0..1000 {
                let a = 0.01 * 10_000f64.powf(i as f64 / 999.0);
                if (a - 1.0).abs() < 1e-6 {
                    continue;
                }
                let v = ratio_of_laplace_cdf(&p, a).unwrap();
                prop_assert!(v >= prev - 1e-12, "a={} {} < {}", a, v, prev);
                prev = v;
            }
        }

        #[test]
        fn betas_are_probabilities(x in 1u64..500, y in 1u64..500, eps in 0.05f64..5.0, frac in 0.01f64..0.99) {
            let t = table(x, y);
            let alpha = frac * t.ratio();
            match noised_counts_accuracy(&t, pure(eps), alpha) {
                Ok(b) => prop_assert!((0.0..=1.0).contains(&b.beta)),
                Err(e) => prop_assert!(matches!(e, Error::Singularity(_)), "{}", e),
            }
            let b = noised_log_accuracy(&t, pure(eps), alpha).unwrap();
            prop_assert!((0.0..=1.0).contains(&b.beta));
        }
    }
}
