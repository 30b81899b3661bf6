//! Batch scheduling, stream assignment and order-fixed reductions.

use std::ops::Range;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{Error, Result};
use crate::mechanisms::{laplace_mechanism, PrivacyBudget, Sensitivity};
use crate::numerics::{BinomialSampler, RngHandle};

/// Replicates per batch. Part of the output contract: changing it changes
/// the floating-point merge order.
pub const BATCH: u64 = 1000;

pub(crate) fn stream_id(cell: usize, eps: usize, rep: u64) -> u64 {
    debug_assert!(cell < 1 << 16 && eps < 1 << 16 && rep < 1 << 32);
    (cell as u64) << 48 | (eps as u64) << 32 | rep
}

pub(crate) fn replicate_rng(seed: u64, cell: usize, eps: usize, rep: u64) -> RngHandle {
    RngHandle::new(seed, stream_id(cell, eps, rep))
}

pub(crate) fn thread_pool(workers: usize) -> Result<ThreadPool> {
    ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Io(format!("cannot start worker pool: {e}")))
}

/// A per-batch summary that can absorb the summary of the next batch.
pub(crate) trait Merge: Default + Send {
    fn merge(&mut self, later: Self);
}

/// Runs `f` on consecutive batches of `0..reps` in parallel and folds the
/// results left to right.
pub(crate) fn batched<A, F>(pool: &ThreadPool, reps: u64, f: F) -> Result<A>
where
    A: Merge,
    F: Fn(Range<u64>) -> Result<A> + Sync,
{
    let batches: Vec<Range<u64>> = (0..reps)
        .step_by(BATCH as usize)
        .map(|s| s..(s + BATCH).min(reps))
        .collect();
    let parts: Vec<A> = pool.install(|| batches.into_par_iter().map(&f).collect::<Result<_>>())?;
    Ok(parts.into_iter().fold(A::default(), |mut acc, p| {
        acc.merge(p);
        acc
    }))
}

/// Running mean and variance (Welford), mergeable (Chan et al.).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance; 0 with fewer than two observations.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }

    pub fn merge(&mut self, other: Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64);
        self.n = n;
    }
}

impl Merge for Moments {
    fn merge(&mut self, later: Self) {
        Moments::merge(self, later)
    }
}

impl<T: Send> Merge for Vec<T> {
    fn merge(&mut self, later: Self) {
        self.extend(later)
    }
}

/// Hit counter for a proportion; its standard error is `√(p(1−p)/n)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    pub hits: u64,
    pub n: u64,
}

impl Tally {
    pub fn record(&mut self, hit: bool) {
        self.n += 1;
        self.hits += hit as u64;
    }

    pub fn rate(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.hits as f64 / self.n as f64
        }
    }

    pub fn se(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            let p = self.rate();
            (p * (1.0 - p) / self.n as f64).sqrt()
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.hits += other.hits;
        self.n += other.n;
    }
}

/// Median absolute error of the maxed noised-counts ratio at one group size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyPoint {
    pub n: u64,
    pub median_abs_error: f64,
}

/// For each `n` (with `n_x = n_y = n`), draws `X ~ Bin(n, p_x)`,
/// `Y ~ Bin(n, p_y)`, releases `X̃ / max(Ỹ, 1)` with `Lap(2/ε)` noise and
/// reports the median of `|p̃ − p_x/p_y|` over `reps` replicates.
pub fn consistency_study(
    ns: &[u64],
    p_x: f64,
    p_y: f64,
    epsilon: f64,
    reps: u64,
    seed: u64,
) -> Result<Vec<ConsistencyPoint>> {
    if reps == 0 || reps > u32::MAX as u64 {
        return Err(Error::InvalidGrid(format!("replications must lie in 1..=2^32-1, got {reps}")));
    }
    if !(p_y > 0.0) {
        return Err(Error::Domain(format!("p_y must be positive, got {p_y}")));
    }
    let half = PrivacyBudget::pure(epsilon / 2.0)?;
    let lap = laplace_mechanism(half, Sensitivity::new(1.0)?)?;
    let truth = p_x / p_y;
    ns.iter()
        .enumerate()
        .map(|(cell, &n)| {
            let x_law = BinomialSampler::new(n, p_x)?;
            let y_law = BinomialSampler::new(n, p_y)?;
            let mut errors: Vec<f64> = (0..reps)
                .map(|r| {
                    let mut rng = replicate_rng(seed, cell, 0, r);
                    let x = x_law.sample_with(&mut rng) as f64 + rng.sample_laplace(&lap);
                    let y = y_law.sample_with(&mut rng) as f64 + rng.sample_laplace(&lap);
                    (x / y.max(1.0) - truth).abs()
                })
                .collect();
            errors.sort_by(f64::total_cmp);
            let mid = errors.len() / 2;
            let median = if errors.len() % 2 == 1 {
                errors[mid]
            } else {
                0.5 * (errors[mid - 1] + errors[mid])
            };
            Ok(ConsistencyPoint { n, median_abs_error: median })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn streams_are_disjoint_per_coordinate() {
        assert_ne!(stream_id(1, 0, 0), stream_id(0, 1, 0));
        assert_ne!(stream_id(0, 1, 0), stream_id(0, 0, 1));
        assert_eq!(stream_id(2, 3, 4), (2u64 << 48) + (3u64 << 32) + 4);
    }

    #[test]
    fn batched_is_independent_of_workers() {
        let run = |workers| {
            let pool = thread_pool(workers).unwrap();
            batched(&pool, 10_500, |range| {
                let mut m = Moments::default();
                for r in range {
                    m.push(replicate_rng(5, 0, 0, r).uniform());
                }
                Ok(m)
            })
            .unwrap()
        };
        let one = run(1);
        assert_eq!(one.count(), 10_500);
        for w in [2, 3, 8] {
            let other = run(w);
            assert_eq!(one.mean().to_bits(), other.mean().to_bits());
            assert_eq!(one.variance().to_bits(), other.variance().to_bits());
        }
    }

    #[test]
    fn batched_propagates_errors() {
        let pool = thread_pool(2).unwrap();
        let out: Result<Moments> = batched(&pool, 3000, |range| {
            if range.start == 1000 {
                Err(Error::Domain("boom".into()))
            } else {
                Ok(Moments::default())
            }
        });
        assert!(out.is_err());
    }

    #[test]
    fn standard_error_scales_with_root_n() {
        let se = |reps: u64| {
            let mut m = Moments::default();
            for r in 0..reps {
                m.push(replicate_rng(11, 0, 0, r).uniform());
            }
            m.se()
        };
        let ratio = se(1_000) / se(10_000);
        assert!((ratio / 10f64.sqrt() - 1.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn consistency_error_shrinks() {
        let pts = consistency_study(&[200, 800, 3200], 0.5, 0.5, 1.0, 1000, 3).unwrap();
        assert!(pts[0].median_abs_error > pts[1].median_abs_error);
        assert!(pts[1].median_abs_error > pts[2].median_abs_error);
    }

    proptest! {
        #[test]
        fn merged_moments_match_direct(xs in prop::collection::vec(-1e3f64..1e3, 1..200), split in 0usize..200) {
            let split = split.min(xs.len());
            let mut all = Moments::default();
            xs.iter().for_each(|&x| all.push(x));
            let (mut a, mut b) = (Moments::default(), Moments::default());
            xs[..split].iter().for_each(|&x| a.push(x));
            xs[split..].iter().for_each(|&x| b.push(x));
            a.merge(b);
            prop_assert_eq!(a.count(), all.count());
            prop_assert!((a.mean() - all.mean()).abs() <= 1e-9 * (1.0 + all.mean().abs()));
            prop_assert!((a.variance() - all.variance()).abs() <= 1e-7 * (1.0 + all.variance()));
            prop_assert!(a.se() >= 0.0);
        }
    }
}
