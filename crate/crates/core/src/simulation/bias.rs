//! Bias of the maxed noised-counts ratio on binomial data.

use super::engine::{batched, replicate_rng, thread_pool, Merge, Moments};
use super::records::BiasRecord;
use super::ExperimentGrid;
use crate::analysis::noised_counts_bias_exact;
use crate::error::{Error, Result};
use crate::estimators::CountTable;
use crate::mechanisms::{laplace_mechanism, PrivacyBudget, Sensitivity};
use crate::numerics::BinomialSampler;

/// Redraws allowed per replicate before a zero-count cell is declared hopeless.
const MAX_REDRAWS: u64 = 10_000;

#[derive(Default)]
struct BiasSums {
    nonprivate: Moments,
    private: Moments,
    exact: Moments,
    gap: Moments,
    resampled: u64,
}

impl Merge for BiasSums {
    fn merge(&mut self, later: Self) {
        self.nonprivate.merge(later.nonprivate);
        self.private.merge(later.private);
        self.exact.merge(later.exact);
        self.gap.merge(later.gap);
        self.resampled += later.resampled;
    }
}

/// `E[1 / max(y + Lap(2/ε), 1)]` for every `y` in `1..=n_y`, index `y`.
///
/// Past `εy/2 = 700` the exact form overflows; there the second-order
/// expansion `(1 + 8/(εy)²)/y` is used, whose error is below `1e-11` relative.
fn inverse_denominator_table(n_y: u64, budget: PrivacyBudget) -> Result<Vec<f64>> {
    let mut table = vec![f64::NAN; n_y as usize + 1];
    for y in 1..=n_y {
        let ey = budget.epsilon() * y as f64;
        table[y as usize] = if ey / 2.0 > 700.0 {
            (1.0 + 8.0 / (ey * ey)) / y as f64
        } else {
            noised_counts_bias_exact(&CountTable::new(1, y, 1, n_y)?, budget)?.expectation
        };
    }
    Ok(table)
}

/// Per (proportions, ε): mean non-private ratio, mean private ratio, the
/// exact private expectation given each draw, and their standard errors.
/// Draws with a zero count are redrawn and counted in `resampled`.
pub fn run_bias_experiment(grid: &ExperimentGrid) -> Result<Vec<BiasRecord>> {
    grid.validate()?;
    let pool = thread_pool(grid.workers)?;
    let (nx, ny) = (grid.n_x as f64, grid.n_y as f64);
    let mut rows = Vec::new();
    for (ci, &[p_x, p_y]) in grid.proportions.iter().enumerate() {
        let x_law = BinomialSampler::new(grid.n_x, p_x)?;
        let y_law = BinomialSampler::new(grid.n_y, p_y)?;
        for (ei, &eps) in grid.epsilons.iter().enumerate() {
            let budget = PrivacyBudget::pure(eps)?;
            let inv = inverse_denominator_table(grid.n_y, budget)?;
            let lap = laplace_mechanism(PrivacyBudget::pure(eps / 2.0)?, Sensitivity::new(1.0)?)?;
            let sums = batched(&pool, grid.replications, |range| {
                let mut s = BiasSums::default();
                for r in range {
                    let mut rng = replicate_rng(grid.seed, ci, ei, r);
                    let mut redraws = 0;
                    let (x, y) = loop {
                        let (x, y) = (x_law.sample_with(&mut rng), y_law.sample_with(&mut rng));
                        if x > 0 && y > 0 {
                            break (x, y);
                        }
                        redraws += 1;
                        if redraws == MAX_REDRAWS {
                            return Err(Error::DegenerateData(format!(
                                "({p_x}, {p_y}) keeps producing zero counts"
                            )));
                        }
                    };
                    s.resampled += redraws;
                    let x_t = x as f64 + rng.sample_laplace(&lap);
                    let y_t = y as f64 + rng.sample_laplace(&lap);
                    let p_hat = (x as f64 / nx) / (y as f64 / ny);
                    let p_tilde = (x_t / nx) / (y_t.max(1.0) / ny);
                    s.nonprivate.push(p_hat);
                    s.private.push(p_tilde);
                    s.exact.push(x as f64 * inv[y as usize] * ny / nx);
                    s.gap.push(p_tilde - p_hat);
                }
                Ok(s)
            })?;
            rows.push(BiasRecord {
                p_x,
                p_y,
                n_x: grid.n_x,
                n_y: grid.n_y,
                epsilon: eps,
                truth: p_x / p_y,
                mean_nonprivate: sums.nonprivate.mean(),
                mean_private: sums.private.mean(),
                mean_exact: sums.exact.mean(),
                mean_privacy_gap: sums.gap.mean(),
                replications: grid.replications,
                resampled: sums.resampled,
                se_nonprivate: sums.nonprivate.se(),
                se_private: sums.private.se(),
                se_exact: sums.exact.se(),
                se_privacy_gap: sums.gap.se(),
            });
        }
    }
    Ok(rows)
}
