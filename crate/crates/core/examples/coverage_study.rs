// A small coverage study, written as CSV to standard output.

use dpratio::simulation::{run_experiment, write_csv, ExperimentGrid, ExperimentKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = ExperimentGrid {
        proportions: vec![[0.5, 0.5], [0.3, 0.6]],
        epsilons: vec![0.5, 1.0],
        replications: 2_000,
        ..ExperimentGrid::preset(ExperimentKind::Coverage)
    };
    let rows = run_experiment(&grid)?;
    write_csv(std::io::stdout().lock(), grid.kind, &rows)?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
