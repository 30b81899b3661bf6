//! The optional TOML config file: one flat table, keys named after the flags
//! (`--x-tilde` becomes `x_tilde`). Flags win over the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::mechanisms::GaussianCalibration;

/// Environment variable consulted for the seed when neither `--seed` nor the
/// config file sets one.
pub const SEED_ENV: &str = "DPRATIO_SEED";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub x: Option<u64>,
    pub y: Option<u64>,
    pub nx: Option<u64>,
    pub ny: Option<u64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    /// Read per subcommand: estimator, interval or calibration name.
    pub method: Option<String>,
    pub proposal: Option<f64>,
    pub curve: Option<String>,
    pub alpha: Option<f64>,
    pub epsilon_grid: Option<String>,
    pub x_tilde: Option<f64>,
    pub y_tilde: Option<f64>,
    pub level: Option<f64>,
    pub noise_variance: Option<f64>,
    pub noise: Option<String>,
    pub sensitivity: Option<f64>,
    pub experiment: Option<String>,
    pub workers: Option<usize>,
    pub replications: Option<u64>,
    pub epsilons: Option<Vec<f64>>,
    pub pairs: Option<Vec<[u64; 2]>>,
    pub proportions: Option<Vec<[f64; 2]>>,
    pub cdf_cells: Option<Vec<[f64; 3]>>,
    pub calibration: Option<GaussianCalibration>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| {
            // serde lists every accepted key after "expected"; the key at fault is enough
            let msg = e.message().split(", expected one of").next().unwrap_or_default().to_string();
            match e.span().and_then(|s| offending_key(text, s.start)) {
                Some(key) => CliError::Usage(format!("malformed config at key `{key}`: {msg}")),
                None => CliError::Usage(format!("malformed config: {msg}")),
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

fn offending_key(text: &str, at: usize) -> Option<String> {
    let start = text.get(..at)?.rfind('\n').map_or(0, |i| i + 1);
    let line = text[start..].lines().next()?;
    let key = line.split('=').next()?.trim();
    (!key.is_empty() && !key.starts_with('[')).then(|| key.to_string())
}

/// Flag, else config value, else an error naming the missing input.
pub(crate) fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("missing required input --{name}")))
}

/// `--seed`, then the config file, then the environment, then 0.
pub(crate) fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag.or(file) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}
