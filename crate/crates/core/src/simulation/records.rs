//! Output rows and their CSV encoding.
//!
//! Column order is grid coordinates, then metrics, then standard errors.
//! Numbers carry 10 significant digits; an empty cell is a gap whose
//! reason is in the `note` column.

use std::io::Write;

use super::coverage::CoverageMethod;
use super::ExperimentKind;
use crate::error::{Error, Result};
use crate::estimators::Method;

/// First line of every CSV file.
pub const CSV_SCHEMA_LINE: &str = "#schema=1";

/// `x` rounded to 10 significant digits, printed in the shortest form that
/// round-trips. Non-finite values print as an empty cell.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let rounded: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRecord {
    pub x: u64,
    pub y: u64,
    pub n_x: u64,
    pub n_y: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub method: Method,
    /// The PTR proposal actually used.
    pub proposal: Option<f64>,
    /// Closed-form `1 − β`.
    pub closed_form: Option<f64>,
    /// Monte Carlo `1 − β`; PTR failures count as misses.
    pub monte_carlo: Option<f64>,
    /// PTR only: fraction of replicates that returned FAIL.
    pub fail_rate: Option<f64>,
    pub replications: u64,
    pub note: String,
    pub monte_carlo_se: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasRecord {
    pub p_x: f64,
    pub p_y: f64,
    pub n_x: u64,
    pub n_y: u64,
    pub epsilon: f64,
    pub truth: f64,
    /// Mean of `p̂ = (X/n_x)/(Y/n_y)`.
    pub mean_nonprivate: f64,
    /// Mean of `p̃ = (X̃/n_x)/(max(Ỹ, 1)/n_y)`.
    pub mean_private: f64,
    /// Exact expectation of `p̃` given `(X, Y)`, averaged over the draws.
    pub mean_exact: f64,
    /// Mean of `p̃ − p̂`.
    pub mean_privacy_gap: f64,
    pub replications: u64,
    /// Draws with `X = 0` or `Y = 0` that were discarded and redrawn.
    pub resampled: u64,
    pub se_nonprivate: f64,
    pub se_private: f64,
    pub se_exact: f64,
    pub se_privacy_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRecord {
    pub p_x: f64,
    pub p_y: f64,
    pub n_x: u64,
    pub n_y: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub level: f64,
    pub method: CoverageMethod,
    /// Standard deviation of the noise on each count (0 without noise).
    pub noise_sd: f64,
    pub coverage: f64,
    /// Mean width over the non-degenerate intervals.
    pub mean_width: Option<f64>,
    pub replications: u64,
    /// Replicates where the interval was undefined; counted as not covering.
    pub degenerate: u64,
    pub coverage_se: f64,
    pub width_se: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdfRecord {
    pub mu1: f64,
    pub mu2: f64,
    pub b: f64,
    pub samples: u64,
    pub ks_distance: f64,
    /// 95% critical value `1.358/√n` of the Kolmogorov distribution.
    pub ks_critical_95: f64,
    /// Null standard deviation of the KS distance, `0.2603/√n`.
    pub ks_se: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentRecord {
    Accuracy(AccuracyRecord),
    Bias(BiasRecord),
    Coverage(CoverageRecord),
    Cdf(CdfRecord),
}

impl ExperimentRecord {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            ExperimentRecord::Accuracy(_) => ExperimentKind::Accuracy,
            ExperimentRecord::Bias(_) => ExperimentKind::Bias,
            ExperimentRecord::Coverage(_) => ExperimentKind::Coverage,
            ExperimentRecord::Cdf(_) => ExperimentKind::CdfValidation,
        }
    }

    pub fn header(kind: ExperimentKind) -> &'static [&'static str] {
        match kind {
            ExperimentKind::Accuracy => &[
                "x", "y", "n_x", "n_y", "epsilon", "delta", "alpha", "method", "proposal", "closed_form",
                "monte_carlo", "fail_rate", "replications", "note", "monte_carlo_se",
            ],
            ExperimentKind::Bias => &[
                "p_x", "p_y", "n_x", "n_y", "epsilon", "truth", "mean_nonprivate", "mean_private",
                "mean_exact", "mean_privacy_gap", "replications", "resampled", "se_nonprivate",
                "se_private", "se_exact", "se_privacy_gap",
            ],
            ExperimentKind::Coverage => &[
                "p_x", "p_y", "n_x", "n_y", "epsilon", "delta", "level", "method", "noise_sd", "coverage",
                "mean_width", "replications", "degenerate", "coverage_se", "width_se",
            ],
            ExperimentKind::CdfValidation => &[
                "mu1", "mu2", "b", "samples", "ks_distance", "ks_critical_95", "ks_se",
            ],
        }
    }

    pub fn fields(&self) -> Vec<String> {
        let f = format_number;
        match self {
            ExperimentRecord::Accuracy(r) => vec![
                r.x.to_string(),
                r.y.to_string(),
                r.n_x.to_string(),
                r.n_y.to_string(),
                f(r.epsilon),
                f(r.delta),
                f(r.alpha),
                r.method.to_string(),
                opt(r.proposal),
                opt(r.closed_form),
                opt(r.monte_carlo),
                opt(r.fail_rate),
                r.replications.to_string(),
                r.note.clone(),
                opt(r.monte_carlo_se),
            ],
            ExperimentRecord::Bias(r) => vec![
                f(r.p_x),
                f(r.p_y),
                r.n_x.to_string(),
                r.n_y.to_string(),
                f(r.epsilon),
                f(r.truth),
                f(r.mean_nonprivate),
                f(r.mean_private),
                f(r.mean_exact),
                f(r.mean_privacy_gap),
                r.replications.to_string(),
                r.resampled.to_string(),
                f(r.se_nonprivate),
                f(r.se_private),
                f(r.se_exact),
                f(r.se_privacy_gap),
            ],
            ExperimentRecord::Coverage(r) => vec![
                f(r.p_x),
                f(r.p_y),
                r.n_x.to_string(),
                r.n_y.to_string(),
                f(r.epsilon),
                f(r.delta),
                f(r.level),
                r.method.to_string(),
                f(r.noise_sd),
                f(r.coverage),
                opt(r.mean_width),
                r.replications.to_string(),
                r.degenerate.to_string(),
                f(r.coverage_se),
                opt(r.width_se),
            ],
            ExperimentRecord::Cdf(r) => vec![
                f(r.mu1),
                f(r.mu2),
                f(r.b),
                r.samples.to_string(),
                f(r.ks_distance),
                f(r.ks_critical_95),
                f(r.ks_se),
            ],
        }
    }
}

/// Writes `#schema=1`, the header of `kind` and one row per record.
pub fn write_csv<W: Write>(out: W, kind: ExperimentKind, records: &[ExperimentRecord]) -> Result<()> {
    let mut out = out;
    writeln!(out, "{CSV_SCHEMA_LINE}")?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(ExperimentRecord::header(kind))?;
    for r in records {
        if r.kind() != kind {
            return Err(Error::InvalidGrid(format!(
                "cannot write a {} record into a {kind} table",
                r.kind()
            )));
        }
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}
