//! Seeded random streams and the noise-source abstraction used by the estimators.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::binomial::BinomialSampler;
use super::dist::{GaussianDist, LaplaceDist};
use crate::error::Result;

/// A reproducible random stream identified by `(seed, stream)`.
///
/// Backed by ChaCha8, which has 2^64 independent streams per seed, so every
/// simulation replicate (or worker) can own its stream without coordination.
/// Two handles built from the same pair yield bit-identical sequences.
#[derive(Debug, Clone)]
pub struct RngHandle {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngHandle {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A fresh handle on another stream of the same seed.
    pub fn substream(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn sample_laplace(&mut self, d: &LaplaceDist) -> f64 {
        self.rng.sample(d)
    }

    pub fn sample_gaussian(&mut self, d: &GaussianDist) -> f64 {
        self.rng.sample(d)
    }

    /// One `Bin(n, p)` draw by inversion. Builds the CDF table on every call;
    /// use [`BinomialSampler`] directly when drawing repeatedly.
    pub fn sample_binomial(&mut self, n: u64, p: f64) -> Result<u64> {
        Ok(BinomialSampler::new(n, p)?.sample_with(self))
    }
}

impl RngCore for RngHandle {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Where an estimator gets its additive noise from.
///
/// Production code passes an [`RngHandle`]; tests substitute [`ScriptedNoise`]
/// to force particular variates and to count how many were drawn.
pub trait NoiseSource {
    fn laplace(&mut self, d: &LaplaceDist) -> f64;
    fn gaussian(&mut self, d: &GaussianDist) -> f64;
}

impl NoiseSource for RngHandle {
    fn laplace(&mut self, d: &LaplaceDist) -> f64 {
        self.sample_laplace(d)
    }

    fn gaussian(&mut self, d: &GaussianDist) -> f64 {
        self.sample_gaussian(d)
    }
}

/// Deterministic noise: returns the location of the requested law plus the
/// next scripted deviation (zero once the script runs out).
#[derive(Debug, Clone, Default)]
pub struct ScriptedNoise {
    deviations: Vec<f64>,
    draws: usize,
}

impl ScriptedNoise {
    /// Every draw returns exactly the location (zero noise).
    pub fn zeros() -> Self {
        Self::default()
    }

    pub fn new(deviations: impl Into<Vec<f64>>) -> Self {
        Self {
            deviations: deviations.into(),
            draws: 0,
        }
    }

    /// Number of variates handed out so far.
    pub fn draws(&self) -> usize {
        self.draws
    }

    fn next_deviation(&mut self) -> f64 {
        let v = self.deviations.get(self.draws).copied().unwrap_or(0.0);
        self.draws += 1;
        v
    }
}

impl NoiseSource for ScriptedNoise {
    fn laplace(&mut self, d: &LaplaceDist) -> f64 {
        d.mu() + self.next_deviation()
    }

    fn gaussian(&mut self, d: &GaussianDist) -> f64 {
        d.mu() + self.next_deviation()
    }
}
