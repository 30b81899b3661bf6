//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the numerical and statistical routines.
///
/// Each variant maps to a stable kebab-case name (see [`Error::name`]) that the
/// command-line tool prints before the message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{0}")]
    Domain(String),

    /// The result does not fit in an `f64`.
    #[error("{0}")]
    Overflow(String),

    /// The closed form has a pole at (or numerically next to) the argument.
    #[error("{0}")]
    Singularity(String),

    /// Debiasing the noised-log estimator needs a finite Laplace moment generating function.
    #[error("epsilon must exceed log 2 (got {epsilon})")]
    InvalidDebias { epsilon: f64 },

    /// A zero sensitivity would give a zero noise scale.
    #[error("sensitivity must be positive for a non-degenerate noise scale")]
    DegenerateScale,

    /// A calibration theorem was used outside the parameter range it covers.
    #[error("{0}")]
    OutOfValidity(String),

    /// Malformed privacy budget, or a budget that does not fit the mechanism.
    #[error("{0}")]
    InvalidBudget(String),

    /// An iterative routine ran out of iterations.
    #[error("{0}")]
    NonConvergence(String),

    /// A documented precondition does not hold.
    #[error("{0}")]
    Precondition(String),

    /// Data for which the requested statistic is not defined (e.g. a negative variance estimate).
    #[error("{0}")]
    DegenerateData(String),

    /// Parameters outside the range where the exact formula can be evaluated in `f64`.
    #[error("{0}")]
    Range(String),

    /// A probability fell outside `[0, 1]` by more than the rounding allowance.
    #[error("{0}")]
    InternalConsistency(String),

    /// An invalid count table.
    #[error("{0}")]
    InvalidTable(String),

    /// A malformed experiment grid or configuration value.
    #[error("{0}")]
    InvalidGrid(String),

    /// Reading or writing a file failed.
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Stable identifier used in command-line diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Overflow(_) => "overflow",
            Error::Singularity(_) => "singularity",
            Error::InvalidDebias { .. } => "invalid-debias",
            Error::DegenerateScale => "degenerate-scale",
            Error::OutOfValidity(_) => "out-of-validity",
            Error::InvalidBudget(_) => "invalid-budget",
            Error::NonConvergence(_) => "non-convergence",
            Error::Precondition(_) => "precondition",
            Error::DegenerateData(_) => "degenerate-data",
            Error::Range(_) => "range",
            Error::InternalConsistency(_) => "internal-consistency",
            Error::InvalidTable(_) => "invalid-table",
            Error::InvalidGrid(_) => "invalid-grid",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Clamp a computed probability into `[0, 1]` when it overshoots by at most
/// `1e-12`; anything further out is reported instead of hidden.
pub(crate) fn clamp_probability(p: f64, what: &str) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !p.is_finite() {
        return Err(Error::InternalConsistency(format!("{what} is not finite ({p})")));
    }
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else if p >= -SLACK && p <= 1.0 + SLACK {
        Ok(p.clamp(0.0, 1.0))
    } else {
        Err(Error::InternalConsistency(format!(
            "{what} = {p} lies outside [0, 1]"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamping_only_within_slack() {
        assert_eq!(clamp_probability(-5e-13, "p").unwrap(), 0.0);
        assert_eq!(clamp_probability(1.0 + 5e-13, "p").unwrap(), 1.0);
        assert_eq!(clamp_probability(0.3, "p").unwrap(), 0.3);
        assert!(matches!(
            clamp_probability(-1e-9, "p"),
            Err(Error::InternalConsistency(_))
        ));
        assert!(clamp_probability(f64::NAN, "p").is_err());
    }

    #[test]
    fn debias_message() {
        let e = Error::InvalidDebias { epsilon: 0.5 };
        assert_eq!(e.name(), "invalid-debias");
        assert!(e.to_string().starts_with("epsilon must exceed log 2"));
    }
}
