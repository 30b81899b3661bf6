//! Differentially private ratio statistics (relative risk) from pairs of counts.
//!
//! The crate covers the whole path from a count table to a released ratio:
//!
//! * [`numerics`]: `Ei`, Laplace and Gaussian laws, seeded random streams.
//! * [`mechanisms`]: privacy budgets, Laplace and Gaussian noise calibration.
//! * [`estimators`]: five private ratio estimators, including smooth
//!   sensitivity and propose-test-release.
//! * [`analysis`]: closed-form accuracy, bias and ratio-of-Laplace CDF.
//! * [`confidence`]: classic, asymptotic private and conservative intervals.
//! * [`simulation`]: deterministic parallel Monte Carlo experiments.
//! * [`cli`]: the `dpratio` command-line front end.

pub mod analysis;
pub mod cli;
pub mod confidence;
pub mod error;
pub mod estimators;
pub mod mechanisms;
pub mod numerics;
pub mod simulation;

pub use error::{Error, Result};
