// Intervals for the relative risk, before and after privatizing the counts.

use dpratio::confidence::{classic_ci, conservative_ci, private_asymptotic_ci, ProportionPair};
use dpratio::estimators::{laplace_noised_counts, CountTable};
use dpratio::mechanisms::PrivacyBudget;
use dpratio::numerics::RngHandle;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let t = CountTable::new(90, 110, 200, 200)?;
    let level = 0.95;
    let show = |name: &str, lo: f64, hi: f64| println!("{name:<22} [{lo:.4}, {hi:.4}]  width {:.4}", hi - lo);

    let c = classic_ci(&t, level)?;
    show("classic", c.lower, c.upper);

    let eps = 0.5;
    let est = laplace_noised_counts(&mut RngHandle::new(3, 0), &t, PrivacyBudget::pure(eps)?, true)?;
    // each count got Lap(2/eps), whose variance is 8/eps^2
    let var = 8.0 / (eps * eps);
    let x = est.x_tilde.unwrap().max(1.0);
    let y = est.y_tilde.unwrap().max(1.0);
    let pp = ProportionPair::from_counts(x, y, 200, 200, var)?;
    let a = private_asymptotic_ci(&pp, level)?;
    show("asymptotic (private)", a.lower, a.upper);
    let k = conservative_ci(&pp, level, true)?;
    show("conservative laplace", k.lower, k.upper);
    println!("released counts: x~ = {x:.2}, y~ = {y:.2}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
