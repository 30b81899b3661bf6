// Closed-form and simulated accuracy curves for the five estimators.

use dpratio::simulation::{run_accuracy_experiment, ExperimentGrid, ExperimentKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = ExperimentGrid {
        pairs: vec![[100, 100], [100, 30]],
        epsilons: vec![0.25, 0.5, 1.0, 2.0, 4.0],
        replications: 2_000,
        ..ExperimentGrid::preset(ExperimentKind::Accuracy)
    };
    println!("{:>9} {:>5} {:<14} {:>8} {:>8}", "(X,Y)", "eps", "method", "closed", "sim");
    for r in run_accuracy_experiment(&grid)? {
        let closed = r.closed_form.map_or("-".into(), |v| format!("{v:.4}"));
        let sim = r.monte_carlo.map_or("-".into(), |v| format!("{v:.4}"));
        println!(
            "{:>9} {:>5} {:<14} {closed:>8} {sim:>8}",
            format!("({},{})", r.x, r.y),
            r.epsilon,
            r.method.name()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
