//! Coverage and width of relative-risk confidence intervals on binomial data.

use std::fmt;

use super::engine::{batched, replicate_rng, thread_pool, Merge, Moments, Tally};
use super::records::CoverageRecord;
use super::ExperimentGrid;
use crate::confidence::{classic_ci, conservative_ci, private_asymptotic_ci, ConfidenceInterval, ProportionPair};
use crate::error::Result;
use crate::estimators::CountTable;
use crate::mechanisms::{laplace_mechanism, PrivacyBudget, Sensitivity};
use crate::numerics::BinomialSampler;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverageMethod {
    /// Katz log interval on the raw counts.
    Classic,
    /// Asymptotic interval on the raw counts.
    NonPrivate,
    /// Asymptotic interval on Laplace-noised counts.
    PrivateLaplace,
    /// Asymptotic interval on Gaussian-noised counts.
    PrivateGaussian,
    ConservativeLaplace,
    ConservativeGaussian,
}

impl CoverageMethod {
    pub const ALL: [CoverageMethod; 6] = [
        CoverageMethod::Classic,
        CoverageMethod::NonPrivate,
        CoverageMethod::PrivateLaplace,
        CoverageMethod::PrivateGaussian,
        CoverageMethod::ConservativeLaplace,
        CoverageMethod::ConservativeGaussian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoverageMethod::Classic => "classic",
            CoverageMethod::NonPrivate => "non-private",
            CoverageMethod::PrivateLaplace => "private-laplace",
            CoverageMethod::PrivateGaussian => "private-gaussian",
            CoverageMethod::ConservativeLaplace => "conservative-laplace",
            CoverageMethod::ConservativeGaussian => "conservative-gaussian",
        }
    }
}

impl fmt::Display for CoverageMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Default, Clone, Copy)]
struct MethodSums {
    covered: Tally,
    width: Moments,
    degenerate: u64,
}

#[derive(Default)]
struct CoverageSums([MethodSums; 6]);

impl Merge for CoverageSums {
    fn merge(&mut self, later: Self) {
        for (a, b) in self.0.iter_mut().zip(later.0) {
            a.covered.merge(b.covered);
            a.width.merge(b.width);
            a.degenerate += b.degenerate;
        }
    }
}

impl MethodSums {
    fn record(&mut self, ci: Result<ConfidenceInterval>, truth: f64) {
        match ci {
            Ok(ci) => {
                self.covered.record(ci.contains(truth));
                self.width.push(ci.width());
            }
            Err(_) => {
                self.covered.record(false);
                self.degenerate += 1;
            }
        }
    }
}

/// Per (proportions, ε, method): coverage of `p_x/p_y` and mean width.
///
/// Each count gets half the budget. Laplace noise is `Lap(2/ε)` per count;
/// Gaussian noise is calibrated with `grid.calibration` at `(ε/2, δ/2)`.
/// Noised counts are clamped below at 1. Intervals that cannot be formed
/// count as not covering and are tallied in `degenerate`.
pub fn run_coverage_experiment(grid: &ExperimentGrid) -> Result<Vec<CoverageRecord>> {
    grid.validate()?;
    let pool = thread_pool(grid.workers)?;
    let (n_x, n_y, level) = (grid.n_x, grid.n_y, grid.level);
    let mut rows = Vec::new();
    for (ci, &[p_x, p_y]) in grid.proportions.iter().enumerate() {
        let x_law = BinomialSampler::new(n_x, p_x)?;
        let y_law = BinomialSampler::new(n_y, p_y)?;
        let truth = p_x / p_y;
        for (ei, &eps) in grid.epsilons.iter().enumerate() {
            let half = PrivacyBudget::new(eps / 2.0, grid.delta / 2.0)?;
            let unit = Sensitivity::new(1.0)?;
            let lap = laplace_mechanism(PrivacyBudget::pure(eps / 2.0)?, unit)?;
            let gauss = grid.calibration.calibrate(half, unit)?;
            let (lap_var, gauss_var) = (lap.variance(), gauss.variance());
            let sums = batched(&pool, grid.replications, |range| {
                let mut s = CoverageSums::default();
                for r in range {
                    let mut rng = replicate_rng(grid.seed, ci, ei, r);
                    let x = x_law.sample_with(&mut rng);
                    let y = y_law.sample_with(&mut rng);
                    let (xl, yl) = (rng.sample_laplace(&lap), rng.sample_laplace(&lap));
                    let (xg, yg) = (rng.sample_gaussian(&gauss), rng.sample_gaussian(&gauss));
                    let (xf, yf) = (x as f64, y as f64);
                    let raw = ProportionPair::from_counts(xf, yf, n_x, n_y, 0.0)?;
                    let laplace =
                        ProportionPair::from_counts((xf + xl).max(1.0), (yf + yl).max(1.0), n_x, n_y, lap_var)?;
                    let gaussian =
                        ProportionPair::from_counts((xf + xg).max(1.0), (yf + yg).max(1.0), n_x, n_y, gauss_var)?;
                    let m = &mut s.0;
                    m[0].record(CountTable::new(x, y, n_x, n_y).and_then(|t| classic_ci(&t, level)), truth);
                    m[1].record(private_asymptotic_ci(&raw, level), truth);
                    m[2].record(private_asymptotic_ci(&laplace, level), truth);
                    m[3].record(private_asymptotic_ci(&gaussian, level), truth);
                    m[4].record(conservative_ci(&laplace, level, true), truth);
                    m[5].record(conservative_ci(&gaussian, level, false), truth);
                }
                Ok(s)
            })?;
            for (method, m) in CoverageMethod::ALL.into_iter().zip(sums.0) {
                let noise_sd = match method {
                    CoverageMethod::Classic | CoverageMethod::NonPrivate => 0.0,
                    CoverageMethod::PrivateLaplace | CoverageMethod::ConservativeLaplace => lap_var.sqrt(),
                    CoverageMethod::PrivateGaussian | CoverageMethod::ConservativeGaussian => gauss.sigma(),
                };
                let formed = m.width.count() > 0;
                rows.push(CoverageRecord {
                    p_x,
                    p_y,
                    n_x,
                    n_y,
                    epsilon: eps,
                    delta: grid.delta,
                    level,
                    method,
                    noise_sd,
                    coverage: m.covered.rate(),
                    mean_width: formed.then(|| m.width.mean()),
                    replications: grid.replications,
                    degenerate: m.degenerate,
                    coverage_se: m.covered.se(),
                    width_se: formed.then(|| m.width.se()),
                });
            }
        }
    }
    Ok(rows)
}
