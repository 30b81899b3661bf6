//! Special functions and probability primitives.
//!
//! Everything here is deterministic given its inputs; random variates come
//! only from an explicitly passed [`RngHandle`].

mod binomial;
mod dist;
mod ei;
pub mod quad;
mod rng;

pub use binomial::BinomialSampler;
pub use dist::{gaussian_cdf, gaussian_quantile, GaussianDist, LaplaceDist};
pub use ei::{ei, EULER_GAMMA};
pub use rng::{NoiseSource, RngHandle, ScriptedNoise};

use crate::error::Result;

/// `P(L ≤ x)` for `L ~ d`.
pub fn laplace_cdf(d: &LaplaceDist, x: f64) -> f64 {
    d.cdf(x)
}

pub fn sample_laplace(rng: &mut RngHandle, d: &LaplaceDist) -> f64 {
    rng.sample_laplace(d)
}

pub fn sample_gaussian(rng: &mut RngHandle, d: &GaussianDist) -> f64 {
    rng.sample_gaussian(d)
}

pub fn sample_binomial(rng: &mut RngHandle, n: u64, p: f64) -> Result<u64> {
    rng.sample_binomial(n, p)
}
