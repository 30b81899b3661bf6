// Every estimator on one table, next to its closed-form accuracy.

use dpratio::analysis::{
    naive_accuracy, noised_counts_accuracy, noised_log_accuracy, ptr_best_proposal, smooth_sens_accuracy,
};
use dpratio::estimators::{estimate, CountTable, Method};
use dpratio::mechanisms::PrivacyBudget;
use dpratio::numerics::RngHandle;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let t = CountTable::new(100, 50, 150, 150)?;
    let (eps, delta, alpha) = (1.0, 1.0 / 150.0, 0.1);
    let pure = PrivacyBudget::pure(eps)?;
    let approx = PrivacyBudget::new(eps, delta)?;
    let (proposal, ptr) = ptr_best_proposal(&t, approx, alpha)?;

    let rows = [
        (Method::NoisedCounts, pure, noised_counts_accuracy(&t, pure, alpha)?.accuracy()),
        (Method::Naive, pure, naive_accuracy(&t, pure, alpha)?.accuracy()),
        (Method::NoisedLog, pure, noised_log_accuracy(&t, pure, alpha)?.accuracy()),
        (Method::SmoothSens, approx, smooth_sens_accuracy(&t, approx, alpha)?.accuracy()),
        (Method::Ptr, approx, ptr.accuracy()),
    ];
    let mut rng = RngHandle::new(42, 0);
    println!("Z = {}, alpha = {alpha}, epsilon = {eps}", t.ratio());
    for (method, budget, acc) in rows {
        let draw = estimate(&mut rng, method, &t, budget, Some(proposal))?;
        let shown = draw.map_or("FAIL".to_string(), |e| format!("{:.4}", e.value));
        println!("{:<14} P(|err| <= alpha) = {acc:.4}   one draw: {shown}", method.name());
    }
    println!("ptr proposal chosen from the grid: {proposal:.5}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
