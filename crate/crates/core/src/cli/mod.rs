//! The `dpratio` command line: `estimate`, `analyze`, `ci`, `calibrate` and
//! `simulate`.
//!
//! Exit status is 0 on success (a PTR `FAIL` included), 1 for numerical or
//! domain errors, 2 for usage errors. Errors print as `name: message`.

mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ConfigFile, SEED_ENV};
use config::{required, resolve_seed};

use crate::analysis::{
    naive_accuracy, noised_counts_accuracy, noised_counts_bias_approx, noised_counts_bias_exact,
    noised_log_accuracy, ptr_accuracy, ptr_best_proposal, smooth_sens_accuracy, AccuracyBound,
};
use crate::confidence::{classic_ci, conservative_ci, private_asymptotic_ci, ConfidenceInterval, ProportionPair};
use crate::error::Error;
use crate::estimators::{estimate, propose_test_release, CountTable, Method};
use crate::mechanisms::{balle_delta, GaussianCalibration, PrivacyBudget, Sensitivity};
use crate::numerics::RngHandle;
use crate::simulation::{format_number as num, run_experiment, write_csv, ExperimentGrid, ExperimentKind, CSV_SCHEMA_LINE};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}: {}", .0.name(), .0)]
    Lib(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Lib(Error::InvalidGrid(_)) => 2,
            CliError::Lib(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(e.into())
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "dpratio", version, about = "Differentially private ratio statistics")]
pub struct Cli {
    /// TOML file with values for any flag (flags take precedence).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Random seed. Falls back to the config file, then $DPRATIO_SEED.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Release one private ratio.
    Estimate(EstimateArgs),
    /// Closed-form accuracy or bias over an epsilon grid, as CSV.
    Analyze(AnalyzeArgs),
    /// A confidence interval for the relative risk, as CSV.
    Ci(CiArgs),
    /// Gaussian noise scale for a budget.
    Calibrate(CalibrateArgs),
    /// Run a Monte Carlo experiment and write CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long)]
    pub y: Option<u64>,
    #[arg(long)]
    pub nx: Option<u64>,
    #[arg(long)]
    pub ny: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Needed by smooth-sens and ptr; must be absent or 0 otherwise.
    #[arg(long)]
    pub delta: Option<f64>,
    /// noised-counts, noised-counts-maxed, naive, noised-log,
    /// noised-log-debiased, smooth-sens or ptr.
    #[arg(long)]
    pub method: Option<String>,
    /// Proposed sensitivity bound for ptr.
    #[arg(long)]
    pub proposal: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// accuracy or bias.
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long)]
    pub y: Option<u64>,
    /// Group sizes (default 150).
    #[arg(long)]
    pub nx: Option<u64>,
    #[arg(long)]
    pub ny: Option<u64>,
    /// Accuracy radius (default 0.1).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// `start:stop:step`, inclusive.
    #[arg(long)]
    pub epsilon_grid: Option<String>,
    /// Estimator for the accuracy curve (default noised-counts).
    #[arg(long)]
    pub method: Option<String>,
    /// For smooth-sens and ptr (default 1/nx).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Fixed ptr proposal; by default the best one on the proposal grid.
    #[arg(long)]
    pub proposal: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    #[arg(long)]
    pub x_tilde: Option<f64>,
    #[arg(long)]
    pub y_tilde: Option<f64>,
    #[arg(long)]
    pub nx: Option<u64>,
    #[arg(long)]
    pub ny: Option<u64>,
    /// Confidence level (default 0.95).
    #[arg(long)]
    pub level: Option<f64>,
    /// classic, asymptotic or conservative.
    #[arg(long)]
    pub method: Option<String>,
    /// Variance of the noise on each count (default 0).
    #[arg(long)]
    pub noise_variance: Option<f64>,
    /// Noise family behind --noise-variance: laplace or gaussian (default).
    #[arg(long)]
    pub noise: Option<String>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// L2 sensitivity (default 1).
    #[arg(long)]
    pub sensitivity: Option<f64>,
    /// balle (default) or dwork.
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// accuracy, bias, coverage or cdf.
    #[arg(long)]
    pub experiment: Option<String>,
    /// Worker threads (default: one per core). Does not change the output.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub replications: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Estimate(a) => cmd_estimate(a, &file, resolve_seed(cli.seed, file.seed)?, out),
        Command::Analyze(a) => cmd_analyze(a, &file, out),
        Command::Ci(a) => cmd_ci(a, &file, out),
        Command::Calibrate(a) => cmd_calibrate(a, &file, out),
        Command::Simulate(a) => cmd_simulate(a, &file, cli.seed, out),
    }
}

fn parse_method(name: &str) -> CliResult<Method> {
    name.parse()
        .map_err(|_| CliError::Usage(format!("unknown --method `{name}`")))
}

fn cmd_estimate(a: EstimateArgs, f: &ConfigFile, seed: u64, out: &mut dyn Write) -> CliResult {
    let x = required(a.x, f.x, "x")?;
    let y = required(a.y, f.y, "y")?;
    let nx = required(a.nx, f.nx, "nx")?;
    let ny = required(a.ny, f.ny, "ny")?;
    let eps = required(a.epsilon, f.epsilon, "epsilon")?;
    let method = parse_method(&required(a.method, f.method.clone(), "method")?)?;
    let delta = a.delta.or(f.delta).unwrap_or(0.0);
    let proposal = a.proposal.or(f.proposal);
    let approximate = matches!(method, Method::SmoothSens | Method::Ptr);
    if approximate && delta == 0.0 {
        return Err(CliError::Usage(format!("--method {method} needs --delta > 0")));
    }
    if !approximate && delta != 0.0 {
        return Err(CliError::Usage(format!("--method {method} is pure DP and takes no --delta")));
    }
    if (method == Method::Ptr) != proposal.is_some() {
        return Err(CliError::Usage("--proposal goes with --method ptr, and only with it".into()));
    }
    let t = CountTable::new(x, y, nx, ny)?;
    let budget = PrivacyBudget::new(eps, delta)?;
    let mut rng = RngHandle::new(seed, 0);
    let tail = format!("epsilon={} delta={}", num(eps), num(delta));
    if let Some(proposal) = proposal {
        let o = propose_test_release(&mut rng, &t, budget, proposal)?;
        let value = o.estimate().map_or("FAIL".to_string(), |e| num(e.value));
        writeln!(
            out,
            "method=ptr gamma_hat={} threshold={} value={value} {tail}",
            num(o.gamma_hat),
            num(o.threshold)
        )?;
        return Ok(());
    }
    let est = estimate(&mut rng, method, &t, budget, None)?.expect("only ptr can fail");
    let mut line = format!("method={method} value={}", num(est.value));
    if let (Some(xt), Some(yt)) = (est.x_tilde, est.y_tilde) {
        line += &format!(" x_tilde={} y_tilde={}", num(xt), num(yt));
    }
    writeln!(out, "{line} {tail}")?;
    Ok(())
}

/// `start:stop:step` with an inclusive end, e.g. `0.5:4:0.5`.
pub fn parse_epsilon_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("--epsilon-grid must be start:stop:step with start <= stop, got `{spec}`"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(start > 0.0 && step > 0.0 && start <= stop && stop.is_finite()) {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::Usage("--epsilon-grid has more than a million points".into()));
    }
    // round to 12 digits so 0.1 + 2·0.1 prints as 0.3
    Ok((0..count)
        .map(|k| {
            let e = start + k as f64 * step;
            format!("{e:.12}").parse().expect("formatted float parses")
        })
        .collect())
}

fn accuracy_at(method: Method, t: &CountTable, eps: f64, delta: f64, alpha: f64, proposal: Option<f64>) -> Result<(AccuracyBound, Option<f64>), Error> {
    let pure = || PrivacyBudget::pure(eps);
    let approx = || PrivacyBudget::new(eps, delta);
    Ok(match method {
        Method::NoisedCounts | Method::NoisedCountsMaxed => (noised_counts_accuracy(t, pure()?, alpha)?, None),
        Method::Naive => (naive_accuracy(t, pure()?, alpha)?, None),
        Method::NoisedLog => (noised_log_accuracy(t, pure()?, alpha)?, None),
        Method::SmoothSens => (smooth_sens_accuracy(t, approx()?, alpha)?, None),
        Method::Ptr => match proposal {
            Some(p) => (ptr_accuracy(t, approx()?, alpha, p)?, Some(p)),
            None => {
                let (p, b) = ptr_best_proposal(t, approx()?, alpha)?;
                (b, Some(p))
            }
        },
        Method::NoisedLogDebiased => {
            return Err(Error::Precondition("no closed-form accuracy for the debiased noised-log estimator".into()))
        }
    })
}

fn open_output(path: Option<PathBuf>, stdout: &mut dyn Write) -> CliResult<Box<dyn Write + '_>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(&p).map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display())))?,
        )),
        None => Box::new(stdout),
    })
}

fn cmd_analyze(a: AnalyzeArgs, f: &ConfigFile, stdout: &mut dyn Write) -> CliResult {
    let curve = required(a.curve, f.curve.clone(), "curve")?;
    let x = required(a.x, f.x, "x")?;
    let y = required(a.y, f.y, "y")?;
    let nx = a.nx.or(f.nx).unwrap_or(150);
    let ny = a.ny.or(f.ny).unwrap_or(150);
    let grid = parse_epsilon_grid(&required(a.epsilon_grid, f.epsilon_grid.clone(), "epsilon-grid")?)?;
    let t = CountTable::new(x, y, nx, ny)?;
    let reason = |e: &Error| format!("{}: {e}", e.name());
    match curve.as_str() {
        "accuracy" => {
            let method = parse_method(a.method.as_deref().or(f.method.as_deref()).unwrap_or("noised-counts"))?;
            let alpha = a.alpha.or(f.alpha).unwrap_or(0.1);
            let delta = a.delta.or(f.delta).unwrap_or(1.0 / nx as f64);
            let proposal = a.proposal.or(f.proposal);
            let mut w = open_output(a.out.or(f.out.clone()), stdout)?;
            writeln!(w, "{CSV_SCHEMA_LINE}\nepsilon,method,beta,accuracy,proposal,reason")?;
            for eps in grid {
                match accuracy_at(method, &t, eps, delta, alpha, proposal) {
                    Ok((b, p)) => writeln!(
                        w,
                        "{},{method},{},{},{},",
                        num(eps),
                        num(b.beta),
                        num(b.accuracy()),
                        p.map(num).unwrap_or_default()
                    )?,
                    Err(e) => writeln!(w, "{},{method},,,,{}", num(eps), csv_text(&reason(&e)))?,
                }
            }
            w.flush()?;
        }
        "bias" => {
            let mut w = open_output(a.out.or(f.out.clone()), stdout)?;
            writeln!(w, "{CSV_SCHEMA_LINE}\nepsilon,ratio,exact,approx,relative_bias,reason")?;
            for eps in grid {
                let budget = PrivacyBudget::pure(eps)?;
                let exact = noised_counts_bias_exact(&t, budget);
                let approx = noised_counts_bias_approx(&t, budget);
                let why: Vec<String> = [&exact, &approx].iter().filter_map(|r| r.as_ref().err()).map(reason).collect();
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    num(eps),
                    num(t.ratio()),
                    exact.as_ref().map(|r| num(r.expectation)).unwrap_or_default(),
                    approx.as_ref().map(|r| num(r.expectation)).unwrap_or_default(),
                    exact.as_ref().map(|r| num(r.relative_bias())).unwrap_or_default(),
                    csv_text(&why.join("; "))
                )?;
            }
            w.flush()?;
        }
        other => return Err(CliError::Usage(format!("unknown --curve `{other}` (accuracy or bias)"))),
    }
    Ok(())
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_ci(a: CiArgs, f: &ConfigFile, out: &mut dyn Write) -> CliResult {
    let xt = required(a.x_tilde, f.x_tilde, "x-tilde")?;
    let yt = required(a.y_tilde, f.y_tilde, "y-tilde")?;
    let nx = required(a.nx, f.nx, "nx")?;
    let ny = required(a.ny, f.ny, "ny")?;
    let method = required(a.method, f.method.clone(), "method")?;
    let level = a.level.or(f.level).unwrap_or(0.95);
    let var = a.noise_variance.or(f.noise_variance).unwrap_or(0.0);
    let laplace = match a.noise.as_deref().or(f.noise.as_deref()).unwrap_or("gaussian") {
        "laplace" => true,
        "gaussian" => false,
        other => return Err(CliError::Usage(format!("unknown --noise `{other}` (laplace or gaussian)"))),
    };
    let ci: ConfidenceInterval = match method.as_str() {
        "classic" => {
            if xt.fract() != 0.0 || yt.fract() != 0.0 || xt < 0.0 || yt < 0.0 {
                return Err(Error::Domain("the classic interval needs whole, nonnegative counts".into()).into());
            }
            classic_ci(&CountTable::new(xt as u64, yt as u64, nx, ny)?, level)?
        }
        "asymptotic" => private_asymptotic_ci(&ProportionPair::from_counts(xt, yt, nx, ny, var)?, level)?,
        "conservative" => conservative_ci(&ProportionPair::from_counts(xt, yt, nx, ny, var)?, level, laplace)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown --method `{other}` (classic, asymptotic or conservative)"
            )))
        }
    };
    writeln!(out, "{CSV_SCHEMA_LINE}\nlower,upper,width,level,method")?;
    writeln!(
        out,
        "{},{},{},{},{}",
        num(ci.lower),
        num(ci.upper),
        num(ci.width()),
        num(ci.level),
        ci.method
    )?;
    Ok(())
}

fn cmd_calibrate(a: CalibrateArgs, f: &ConfigFile, out: &mut dyn Write) -> CliResult {
    let eps = required(a.epsilon, f.epsilon, "epsilon")?;
    let delta = required(a.delta, f.delta, "delta")?;
    let s = a.sensitivity.or(f.sensitivity).unwrap_or(1.0);
    let method = match a.method.as_deref().or(f.method.as_deref()).unwrap_or("balle") {
        "balle" => GaussianCalibration::Balle,
        "dwork" => GaussianCalibration::Dwork,
        other => return Err(CliError::Usage(format!("unknown --method `{other}` (balle or dwork)"))),
    };
    let sigma = method.calibrate(PrivacyBudget::new(eps, delta)?, Sensitivity::new(s)?)?.sigma();
    let name = if method == GaussianCalibration::Balle { "balle" } else { "dwork" };
    writeln!(
        out,
        "method={name} sigma={} delta_at_sigma={}",
        num(sigma),
        num(balle_delta(eps, sigma, s))
    )?;
    Ok(())
}

/// The preset for `kind` with config-file values laid over it.
pub fn grid_from_config(kind: ExperimentKind, f: &ConfigFile) -> ExperimentGrid {
    let mut g = ExperimentGrid::preset(kind);
    let set = |slot: &mut u64, v: Option<u64>| {
        if let Some(v) = v {
            *slot = v
        }
    };
    set(&mut g.n_x, f.nx);
    set(&mut g.n_y, f.ny);
    set(&mut g.replications, f.replications);
    set(&mut g.seed, f.seed);
    if let Some(v) = &f.pairs {
        g.pairs = v.clone();
    }
    if let Some(v) = &f.proportions {
        g.proportions = v.clone();
    }
    if let Some(v) = &f.cdf_cells {
        g.cdf_cells = v.clone();
    }
    if let Some(v) = &f.epsilons {
        g.epsilons = v.clone();
    }
    g.delta = f.delta.unwrap_or(g.delta);
    g.level = f.level.unwrap_or(g.level);
    g.alpha = f.alpha.unwrap_or(g.alpha);
    g.calibration = f.calibration.unwrap_or(g.calibration);
    g.workers = f.workers.unwrap_or(g.workers);
    g
}

fn cmd_simulate(a: SimulateArgs, f: &ConfigFile, seed_flag: Option<u64>, out: &mut dyn Write) -> CliResult {
    let kind: ExperimentKind = required(a.experiment, f.experiment.clone(), "experiment")?
        .parse()
        .map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let path = required(a.out, f.out.clone(), "out")?;
    let mut grid = grid_from_config(kind, f);
    if seed_flag.is_some() || f.seed.is_some() || std::env::var_os(SEED_ENV).is_some() {
        grid.seed = resolve_seed(seed_flag, f.seed)?;
    }
    grid.workers = a.workers.unwrap_or(grid.workers);
    grid.replications = a.replications.unwrap_or(grid.replications);
    grid.validate()?;
    let records = run_experiment(&grid)?;
    let file = File::create(&path).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    write_csv(&mut w, kind, &records)?;
    w.flush()?;
    writeln!(out, "wrote {} {kind} rows to {}", records.len(), path.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = main_with(std::iter::once("dpratio").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn epsilon_grid_parsing() {
        assert_eq!(parse_epsilon_grid("0.1:0.5:0.1").unwrap(), vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(parse_epsilon_grid("1:1:1").unwrap(), vec![1.0]);
        for bad in ["", "1:0.5:0.1", "0:1:0.1", "1:2", "1:2:0", "a:b:c"] {
            assert!(parse_epsilon_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn estimate_is_reproducible() {
        let args = ["estimate", "--x", "100", "--y", "50", "--nx", "150", "--ny", "150", "--epsilon", "1", "--method", "noised-counts", "--seed", "7"];
        let (code, first, _) = run_args(&args);
        assert_eq!(code, 0);
        assert!(first.starts_with("method=noised-counts value="));
        assert!(first.contains("x_tilde=") && first.ends_with("epsilon=1 delta=0\n"));
        assert_eq!(run_args(&args).1, first);
    }

    #[test]
    fn debias_below_log_two_is_a_domain_error() {
        let (code, _, err) = run_args(&[
            "estimate", "--x", "100", "--y", "50", "--nx", "150", "--ny", "150", "--epsilon", "0.5", "--method",
            "noised-log-debiased",
        ]);
        assert_eq!(code, 1);
        assert!(err.starts_with("invalid-debias: epsilon must exceed log 2"), "{err}");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["estimate", "--x", "1"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["analyze", "--curve", "accuracy", "--x", "1", "--y", "1", "--epsilon-grid", "2:1:1"]).0, 2);
        assert_eq!(run_args(&["estimate", "--x", "1", "--y", "1", "--nx", "2", "--ny", "2", "--epsilon", "1", "--method", "ptr", "--delta", "0.1"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn calibrate_reports_sigma() {
        let (code, out, _) = run_args(&["calibrate", "--epsilon", "0.5", "--delta", "1e-4", "--method", "dwork"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("method=dwork sigma=8.687224608"), "{out}");
        let (code, _, err) = run_args(&["calibrate", "--epsilon", "1.5", "--delta", "1e-4", "--method", "dwork"]);
        assert_eq!(code, 1, "{err}");
    }
}
