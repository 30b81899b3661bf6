//! Seeded, parallel Monte Carlo experiments.
//!
//! Replicate `r` of grid cell `c` at epsilon index `e` always draws from the
//! ChaCha stream `(seed, c << 48 | e << 32 | r)`. Replicates are grouped in
//! fixed batches of [`BATCH`] and the batch summaries are merged in batch
//! order, so the output is bit-identical for any number of workers.

mod accuracy;
mod bias;
mod cdf;
mod coverage;
mod engine;
mod records;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanisms::GaussianCalibration;

pub use accuracy::{run_accuracy_experiment, ACCURACY_METHODS};
pub use bias::run_bias_experiment;
pub use cdf::{kolmogorov_smirnov, run_cdf_validation};
pub use coverage::{run_coverage_experiment, CoverageMethod};
pub use engine::{consistency_study, ConsistencyPoint, Moments, BATCH};
pub use records::{
    format_number, write_csv, AccuracyRecord, BiasRecord, CdfRecord, CoverageRecord, ExperimentRecord,
    CSV_SCHEMA_LINE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Accuracy,
    Bias,
    Coverage,
    #[serde(rename = "cdf")]
    CdfValidation,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 4] = [
        ExperimentKind::Accuracy,
        ExperimentKind::Bias,
        ExperimentKind::Coverage,
        ExperimentKind::CdfValidation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Accuracy => "accuracy",
            ExperimentKind::Bias => "bias",
            ExperimentKind::Coverage => "coverage",
            ExperimentKind::CdfValidation => "cdf",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidGrid(format!("unknown experiment `{s}`")))
    }
}

/// One experiment: which study, its parameter grid and the Monte Carlo settings.
///
/// Only the fields of the selected kind are read: `pairs` (fixed counts) for
/// accuracy, `proportions` for bias and coverage, `cdf_cells` for the CDF check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentGrid {
    pub kind: ExperimentKind,
    pub n_x: u64,
    pub n_y: u64,
    #[serde(default)]
    pub pairs: Vec<[u64; 2]>,
    #[serde(default)]
    pub proportions: Vec<[f64; 2]>,
    /// `(μ₁, μ₂, b)` triples.
    #[serde(default)]
    pub cdf_cells: Vec<[f64; 3]>,
    #[serde(default)]
    pub epsilons: Vec<f64>,
    pub delta: f64,
    pub replications: u64,
    pub level: f64,
    pub seed: u64,
    pub alpha: f64,
    #[serde(default)]
    pub calibration: GaussianCalibration,
    /// Worker threads; `0` means one per core. Never affects the output.
    #[serde(default)]
    pub workers: usize,
}

fn epsilon_steps(from: u32, to: u32, per_unit: u32) -> Vec<f64> {
    (from..=to).map(|k| k as f64 / per_unit as f64).collect()
}

impl ExperimentGrid {
    /// The published protocol for each study.
    pub fn preset(kind: ExperimentKind) -> Self {
        let base = Self {
            kind,
            n_x: 150,
            n_y: 150,
            pairs: Vec::new(),
            proportions: Vec::new(),
            cdf_cells: Vec::new(),
            epsilons: Vec::new(),
            delta: 1.0 / 150.0,
            replications: 10_000,
            level: 0.95,
            seed: 2024,
            alpha: 0.1,
            calibration: GaussianCalibration::Balle,
            workers: 0,
        };
        match kind {
            ExperimentKind::Accuracy => Self {
                pairs: vec![[100, 100], [50, 100], [100, 50], [100, 30]],
                epsilons: epsilon_steps(1, 40, 10),
                ..base
            },
            ExperimentKind::Bias => Self {
                proportions: vec![[1.0 / 3.0, 2.0 / 3.0], [0.5, 0.5], [2.0 / 3.0, 1.0 / 3.0]],
                epsilons: epsilon_steps(1, 20, 4),
                replications: 20_000,
                ..base
            },
            ExperimentKind::Coverage => Self {
                n_x: 200,
                n_y: 200,
                proportions: vec![[0.5, 0.5], [0.1, 0.1]],
                epsilons: vec![0.5],
                delta: 1e-4,
                ..base
            },
            ExperimentKind::CdfValidation => Self {
                cdf_cells: vec![[100.0, 100.0, 2.0], [100.0, 50.0, 2.0], [50.0, 100.0, 4.0]],
                replications: 1_000_000,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGrid(msg));
        if self.n_x == 0 || self.n_y == 0 {
            return bad("n_x and n_y must be positive".into());
        }
        if self.replications == 0 || self.replications > u32::MAX as u64 {
            return bad(format!("replications must lie in 1..=2^32-1, got {}", self.replications));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return bad(format!("delta must lie in [0, 1), got {}", self.delta));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad(format!("level must lie in (0, 1), got {}", self.level));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return bad(format!("epsilons must be positive, got {e}"));
        }
        if self.epsilons.len() > 1 << 16 {
            return bad("at most 65536 epsilon values".into());
        }
        let cells = match self.kind {
            ExperimentKind::Accuracy => {
                for &[x, y] in &self.pairs {
                    if x == 0 || y == 0 || x > self.n_x || y > self.n_y {
                        return bad(format!(
                            "pair ({x}, {y}) must satisfy 1 <= x <= n_x and 1 <= y <= n_y"
                        ));
                    }
                }
                self.pairs.len()
            }
            ExperimentKind::Bias | ExperimentKind::Coverage => {
                for &[p, q] in &self.proportions {
                    if !(p > 0.0 && p <= 1.0 && q > 0.0 && q <= 1.0) {
                        return bad(format!("proportions ({p}, {q}) must lie in (0, 1]"));
                    }
                }
                self.proportions.len()
            }
            ExperimentKind::CdfValidation => {
                for &[m1, m2, b] in &self.cdf_cells {
                    if !(m1.is_finite() && m2.is_finite() && b > 0.0 && b.is_finite()) {
                        return bad(format!("cdf cell ({m1}, {m2}, {b}) needs finite means and b > 0"));
                    }
                }
                self.cdf_cells.len()
            }
        };
        if cells == 0 {
            return bad(format!("the {} grid has no cells", self.kind));
        }
        if cells > 1 << 12 {
            return bad("at most 4096 grid cells".into());
        }
        if self.kind != ExperimentKind::CdfValidation && self.epsilons.is_empty() {
            return bad("the epsilon grid is empty".into());
        }
        Ok(())
    }
}

/// Runs the experiment selected by `grid.kind`.
pub fn run_experiment(grid: &ExperimentGrid) -> Result<Vec<ExperimentRecord>> {
    Ok(match grid.kind {
        ExperimentKind::Accuracy => run_accuracy_experiment(grid)?
            .into_iter()
            .map(ExperimentRecord::Accuracy)
            .collect(),
        ExperimentKind::Bias => run_bias_experiment(grid)?.into_iter().map(ExperimentRecord::Bias).collect(),
        ExperimentKind::Coverage => run_coverage_experiment(grid)?
            .into_iter()
            .map(ExperimentRecord::Coverage)
            .collect(),
        ExperimentKind::CdfValidation => run_cdf_validation(grid)?.into_iter().map(ExperimentRecord::Cdf).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for kind in ExperimentKind::ALL {
            ExperimentGrid::preset(kind).validate().unwrap();
            assert_eq!(kind.name().parse::<ExperimentKind>().unwrap(), kind);
        }
        let acc = ExperimentGrid::preset(ExperimentKind::Accuracy);
        assert_eq!(acc.epsilons.len(), 40);
        assert_eq!(acc.epsilons[9], 1.0);
    }

    #[test]
    fn validation_rejects_bad_grids() {
        let mut g = ExperimentGrid::preset(ExperimentKind::Bias);
        g.epsilons.clear();
        assert!(matches!(g.validate(), Err(Error::InvalidGrid(_))));
        let mut g = ExperimentGrid::preset(ExperimentKind::Accuracy);
        g.pairs.push([151, 3]);
        assert!(g.validate().is_err());
        let mut g = ExperimentGrid::preset(ExperimentKind::Coverage);
        g.replications = 0;
        assert!(g.validate().is_err());
        let mut g = ExperimentGrid::preset(ExperimentKind::CdfValidation);
        g.cdf_cells = vec![[1.0, 1.0, 0.0]];
        assert!(g.validate().is_err());
    }

    #[test]
    fn grid_round_trips_through_toml() {
        let g = ExperimentGrid::preset(ExperimentKind::Coverage);
        let text = toml::to_string(&g).unwrap();
        let back: ExperimentGrid = toml::from_str(&text).unwrap();
        assert_eq!(back, g);
        let err = toml::from_str::<ExperimentGrid>(&text.replace("alpha", "alfa")).unwrap_err();
        assert!(err.to_string().contains("alfa"));
    }
}
