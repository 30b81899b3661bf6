//! Experiment output depends on the grid and the seed only.

use dpratio::simulation::{run_experiment, write_csv, ExperimentGrid, ExperimentKind, BATCH};

fn csv(grid: &ExperimentGrid) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(&mut buf, grid.kind, &run_experiment(grid).unwrap()).unwrap();
    buf
}

fn small(kind: ExperimentKind) -> ExperimentGrid {
    let mut g = ExperimentGrid::preset(kind);
    // a partial last batch exercises the merge
    g.replications = 2 * BATCH + 377;
    g.epsilons.truncate(2);
    g.pairs.truncate(2);
    g
}

#[test]
fn worker_count_does_not_change_output() {
    for kind in ExperimentKind::ALL {
        let grid = small(kind);
        let reference = csv(&ExperimentGrid { workers: 1, ..grid.clone() });
        for workers in [2, 5, 8] {
            assert_eq!(csv(&ExperimentGrid { workers, ..grid.clone() }), reference, "{kind} with {workers} workers");
        }
    }
}

#[test]
fn seed_changes_output() {
    let grid = small(ExperimentKind::Bias);
    assert_ne!(csv(&grid), csv(&ExperimentGrid { seed: grid.seed + 1, ..grid.clone() }));
}

#[test]
fn cells_do_not_share_streams() {
    // identical cells at two grid positions must still get different draws
    let grid = ExperimentGrid {
        proportions: vec![[0.5, 0.5], [0.5, 0.5]],
        epsilons: vec![1.0],
        replications: 1000,
        ..ExperimentGrid::preset(ExperimentKind::Bias)
    };
    let rows = dpratio::simulation::run_bias_experiment(&grid).unwrap();
    assert_ne!(rows[0].mean_private, rows[1].mean_private);
}
