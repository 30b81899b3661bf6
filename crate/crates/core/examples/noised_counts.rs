// Release a relative risk by adding Laplace noise to both counts.

use dpratio::estimators::{laplace_noised_counts, CountTable};
use dpratio::mechanisms::PrivacyBudget;
use dpratio::numerics::{RngHandle, ScriptedNoise};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // 100 of 150 exposed and 50 of 150 unexposed subjects had the outcome
    let table = CountTable::new(100, 50, 150, 150)?;
    let budget = PrivacyBudget::pure(1.0)?;
    println!("true ratio X/Y = {}", table.ratio());

    let mut rng = RngHandle::new(7, 0);
    for _ in 0..3 {
        let est = laplace_noised_counts(&mut rng, &table, budget, true)?;
        println!(
            "x~ = {:8.3}  y~ = {:8.3}  x~/max(y~,1) = {:.4}",
            est.x_tilde.unwrap(),
            est.y_tilde.unwrap(),
            est.value
        );
    }

    // a scripted noise source makes the arithmetic visible
    let mut script = ScriptedNoise::new([3.0, -60.0]);
    let clamped = laplace_noised_counts(&mut script, &table, budget, true)?;
    println!("with y~ = -10 the denominator is clamped: {}", clamped.value);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
