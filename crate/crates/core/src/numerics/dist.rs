//! Laplace and Gaussian laws: densities, CDFs and quantiles.

use std::f64::consts::SQRT_2;

use rand::distr::{Distribution, Open01};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Laplace law with location `mu` and scale `b`; density `exp(-|x-mu|/b) / 2b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceDist {
    mu: f64,
    b: f64,
}

impl LaplaceDist {
    pub fn new(mu: f64, b: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::Domain(format!("Laplace location must be finite, got {mu}")));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("Laplace scale must be positive, got {b}")));
        }
        Ok(Self { mu, b })
    }

    /// Zero-mean Laplace noise with scale `b`.
    pub fn centered(b: f64) -> Result<Self> {
        Self::new(0.0, b)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn scale(&self) -> f64 {
        self.b
    }

    pub fn variance(&self) -> f64 {
        2.0 * self.b * self.b
    }

    pub fn pdf(&self, x: f64) -> f64 {
        (-(x - self.mu).abs() / self.b).exp() / (2.0 * self.b)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.b;
        if z <= 0.0 {
            0.5 * z.exp()
        } else {
            1.0 - 0.5 * (-z).exp()
        }
    }

    /// Inverse CDF; `p` must lie strictly inside `(0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_open_unit(p)?;
        Ok(if p < 0.5 {
            self.mu + self.b * (2.0 * p).ln()
        } else {
            self.mu - self.b * (2.0 * (1.0 - p)).ln()
        })
    }
}

impl Distribution<f64> for LaplaceDist {
    /// Inversion sampling from an open-interval uniform.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        if u < 0.5 {
            self.mu + self.b * (2.0 * u).ln()
        } else {
            self.mu - self.b * (2.0 * (1.0 - u)).ln()
        }
    }
}

/// Normal law with mean `mu` and standard deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDist {
    mu: f64,
    sigma: f64,
}

impl GaussianDist {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::Domain(format!("Gaussian mean must be finite, got {mu}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!(
                "Gaussian standard deviation must be positive, got {sigma}"
            )));
        }
        Ok(Self { mu, sigma })
    }

    pub fn centered(sigma: f64) -> Result<Self> {
        Self::new(0.0, sigma)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }

    pub fn cdf(&self, x: f64) -> f64 {
        gaussian_cdf((x - self.mu) / self.sigma)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        Ok(self.mu + self.sigma * gaussian_quantile(p)?)
    }
}

impl Distribution<f64> for GaussianDist {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.mu + self.sigma * z
    }
}

/// Standard normal CDF `Φ(x)`, computed from `erfc` so both tails keep
/// full relative precision.
pub fn gaussian_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal quantile `Φ⁻¹(p)` (Wichura's AS241, about 16 digits).
pub fn gaussian_quantile(p: f64) -> Result<f64> {
    check_open_unit(p)?;
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return Ok(q * horner(&AS241_A, r) / horner(&AS241_B, r));
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = (-tail.ln()).sqrt();
    let value = if r <= 5.0 {
        horner(&AS241_C, r - 1.6) / horner(&AS241_D, r - 1.6)
    } else {
        horner(&AS241_E, r - 5.0) / horner(&AS241_F, r - 5.0)
    };
    Ok(if q < 0.0 { -value } else { value })
}

// Coefficients in increasing degree.
const AS241_A: [f64; 8] = [
    3.387_132_872_796_366_6,
    133.141_667_891_784_38,
    1_971.590_950_306_551_4,
    13_731.693_765_509_461,
    45_921.953_931_549_871,
    67_265.770_927_008_7,
    33_430.575_583_588_128,
    2_509.080_928_730_122_7,
];
const AS241_B: [f64; 8] = [
    1.0,
    42.313_330_701_600_911,
    687.187_007_492_057_9,
    5_394.196_021_424_751,
    21_213.794_301_586_596,
    39_307.895_800_092_71,
    28_729.085_735_721_943,
    5_226.495_278_852_854_6,
];
const AS241_C: [f64; 8] = [
    1.423_437_110_749_683_6,
    4.630_337_846_156_545_3,
    5.769_497_221_460_691_4,
    3.647_848_324_763_204_6,
    1.270_458_252_452_368_4,
    0.241_780_725_177_450_6,
    0.022_723_844_989_269_185,
    7.745_450_142_783_414e-4,
];
const AS241_D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_8,
    1.676_384_830_183_803_8,
    0.689_767_334_985_1,
    0.148_103_976_427_480_07,
    0.015_198_666_563_616_457,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_8e-9,
];
const AS241_E: [f64; 8] = [
    6.657_904_643_501_103_8,
    5.463_784_911_164_114_4,
    1.784_826_539_917_291_3,
    0.296_560_571_828_504_9,
    0.026_532_189_526_576_123,
    0.001_242_660_947_388_078_4,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288_1e-7,
];
const AS241_F: [f64; 8] = [
    1.0,
    0.599_832_206_555_887_9,
    0.136_929_880_922_735_8,
    0.014_875_361_290_850_615,
    7.868_691_311_456_132_6e-4,
    1.846_318_317_510_054_7e-5,
    1.421_511_758_316_445_9e-7,
    2.044_263_103_389_939_8e-15,
];

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "quantile argument must lie strictly inside (0, 1), got {p}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplace_cdf_examples() {
        let d = LaplaceDist::new(5.0, 2.0).unwrap();
        assert_eq!(d.cdf(5.0), 0.5);
        let d = LaplaceDist::new(0.0, 2.0).unwrap();
        assert!((d.cdf(-4.0) - 0.5 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((d.cdf(-4.0) - 0.067_667_641_618_306_35).abs() < 1e-12);
        let d = LaplaceDist::new(0.0, 1.0).unwrap();
        assert_eq!(d.cdf(1e9), 1.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(LaplaceDist::new(0.0, 0.0).is_err());
        assert!(LaplaceDist::new(0.0, -1.0).is_err());
        assert!(GaussianDist::new(0.0, 0.0).is_err());
        assert!(GaussianDist::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_cdf(0.0), 0.5);
        // root of Φ(x) = 0.975 at 50 digits
        assert!((gaussian_quantile(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-6);
        assert!((gaussian_quantile(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-13);
        assert!((gaussian_quantile(gaussian_cdf(1.3)).unwrap() - 1.3).abs() < 1e-9);
    }

    #[test]
    fn quantile_rejects_closed_endpoints() {
        assert!(gaussian_quantile(0.0).is_err());
        assert!(gaussian_quantile(1.0).is_err());
        assert!(LaplaceDist::new(0.0, 1.0).unwrap().quantile(1.0).is_err());
    }

    #[test]
    fn round_trips_on_probability_grid() {
        let lap = LaplaceDist::new(1.5, 0.7).unwrap();
        let gau = GaussianDist::new(-2.0, 3.0).unwrap();
        for i in 1..=100 {
            let p = (i as f64 - 0.5) / 100.0;
            assert!((gaussian_cdf(gaussian_quantile(p).unwrap()) - p).abs() <= 1e-12, "p={p}");
            assert!((lap.cdf(lap.quantile(p).unwrap()) - p).abs() <= 1e-9);
            assert!((gau.cdf(gau.quantile(p).unwrap()) - p).abs() <= 1e-9);
        }
        for p in [1e-300, 1e-100, 1e-20, 1e-8, 1.0 - 1e-8, 1.0 - 1e-15] {
            let x = gaussian_quantile(p).unwrap();
            let back = gaussian_cdf(x);
            assert!(((back - p) / p).abs() < 1e-9, "p={p}");
        }
    }

    #[test]
    fn quantile_is_antisymmetric() {
        for p in [0.01, 0.2, 0.4, 0.49] {
            let lo = gaussian_quantile(p).unwrap();
            let hi = gaussian_quantile(1.0 - p).unwrap();
            assert!((lo + hi).abs() < 1e-12);
        }
    }
}
