//! Exact binomial sampling by inversion of a tabulated CDF.

use rand::Rng;

use crate::error::{Error, Result};

/// `Bin(n, p)` sampler holding the full CDF table (`n + 1` entries).
///
/// The pmf is built by the ratio recurrence outward from the mode, so no term
/// is evaluated through factorials and nothing overflows; tail entries that
/// underflow to zero are below `1e-300` and cannot be hit by a double uniform.
#[derive(Debug, Clone)]
pub struct BinomialSampler {
    n: u64,
    p: f64,
    cdf: Vec<f64>,
}

impl BinomialSampler {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("binomial size must be positive".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "binomial probability must lie in [0, 1], got {p}"
            )));
        }
        let cdf = if p == 0.0 || p == 1.0 {
            Vec::new()
        } else {
            build_cdf(n, p)
        };
        Ok(Self { n, p, cdf })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.p == 0.0 {
            return 0;
        }
        if self.p == 1.0 {
            return self.n;
        }
        let u: f64 = rng.random();
        let k = self.cdf.partition_point(|&c| c <= u);
        (k as u64).min(self.n)
    }
}

fn build_cdf(n: u64, p: f64) -> Vec<f64> {
    let q = 1.0 - p;
    let len = n as usize + 1;
    let mode = (((n + 1) as f64 * p).floor() as usize).min(n as usize);
    let mut w = vec![0.0; len];
    w[mode] = 1.0;
    let odds = p / q;
    for k in mode + 1..len {
        w[k] = w[k - 1] * ((n as usize - k + 1) as f64 / k as f64) * odds;
    }
    for k in (0..mode).rev() {
        w[k] = w[k + 1] * ((k + 1) as f64 / (n as usize - k) as f64) / odds;
    }
    let total: f64 = w.iter().sum();
    let mut acc = 0.0;
    for x in w.iter_mut() {
        acc += *x / total;
        *x = acc;
    }
    w[len - 1] = 1.0;
    w
}
