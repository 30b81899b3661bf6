// Check the closed-form law of a ratio of Laplace variables against samples.

use dpratio::analysis::{ratio_of_laplace_cdf, RatioLawParams};
use dpratio::simulation::{run_cdf_validation, ExperimentGrid, ExperimentKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RatioLawParams::new(100.0, 50.0, 2.0)?;
    for a in [1.8, 1.9, 2.0, 2.1, 2.2] {
        println!("P((100+L1)/(50+L2) < {a}) = {:.6}", ratio_of_laplace_cdf(&p, a)?);
    }

    let grid = ExperimentGrid {
        replications: 200_000,
        ..ExperimentGrid::preset(ExperimentKind::CdfValidation)
    };
    for r in run_cdf_validation(&grid)? {
        println!(
            "mu1={:<4} mu2={:<4} b={:<2} KS = {:.5} (95% critical {:.5})",
            r.mu1, r.mu2, r.b, r.ks_distance, r.ks_critical_95
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
