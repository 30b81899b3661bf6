// Data-dependent noise: smooth sensitivity and propose-test-release.

use dpratio::estimators::{
    local_sensitivity_ratio, propose_test_release, ptr_distance_to_unsafe, smooth_sensitivity_ratio, CountTable,
};
use dpratio::mechanisms::PrivacyBudget;
use dpratio::numerics::RngHandle;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let b = PrivacyBudget::new(1.0, 1.0 / 150.0)?;
    for (x, y) in [(100, 100), (100, 50), (100, 30)] {
        let t = CountTable::new(x, y, 150, 150)?;
        println!(
            "({x},{y}): LS = {:.5}, S* = {:.5}",
            local_sensitivity_ratio(&t)?,
            smooth_sensitivity_ratio(&t, b)?
        );
    }

    let t = CountTable::new(100, 50, 150, 150)?;
    let proposal = 0.1;
    println!("distance to a table with LS >= {proposal}: {}", ptr_distance_to_unsafe(&t, proposal)?);
    let mut rng = RngHandle::new(9, 0);
    for _ in 0..4 {
        let out = propose_test_release(&mut rng, &t, b, proposal)?;
        match out.estimate() {
            Some(e) => println!("gamma^ = {:6.2} > {:.2}: released {:.4}", out.gamma_hat, out.threshold, e.value),
            None => println!("gamma^ = {:6.2} <= {:.2}: FAIL", out.gamma_hat, out.threshold),
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
