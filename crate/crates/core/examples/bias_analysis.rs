// Bias of X~ / max(Y~, 1): exact form, integral approximation and simulation.

use dpratio::analysis::{noised_counts_bias_approx, noised_counts_bias_exact};
use dpratio::estimators::{laplace_noised_counts, CountTable};
use dpratio::mechanisms::PrivacyBudget;
use dpratio::numerics::RngHandle;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let t = CountTable::new(100, 30, 150, 150)?;
    println!("Z = {:.6}", t.ratio());
    println!("{:>6} {:>6} {:>10} {:>10} {:>9}", "eps", "eps*Y", "exact", "approx", "rel.bias");
    for eps in [0.1, 0.25, 0.5, 1.0, 2.0] {
        let b = PrivacyBudget::pure(eps)?;
        let exact = noised_counts_bias_exact(&t, b)?;
        let approx = noised_counts_bias_approx(&t, b)
            .map(|r| format!("{:.6}", r.expectation))
            .unwrap_or_else(|e| format!("({})", e.name()));
        println!(
            "{eps:>6} {:>6} {:>10.6} {approx:>10} {:>8.3}%",
            eps * t.y() as f64,
            exact.expectation,
            100.0 * exact.relative_bias()
        );
    }

    let b = PrivacyBudget::pure(1.0)?;
    let mut rng = RngHandle::new(1, 0);
    let n = 200_000;
    let mut sum = 0.0;
    for _ in 0..n {
        sum += laplace_noised_counts(&mut rng, &t, b, true)?.value;
    }
    println!(
        "epsilon = 1: simulated mean {:.5} over {n} draws, exact {:.5}",
        sum / n as f64,
        noised_counts_bias_exact(&t, b)?.expectation
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
