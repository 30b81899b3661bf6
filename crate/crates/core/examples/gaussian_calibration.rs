// Gaussian noise scales: the classic bound against exact bisection.

use dpratio::mechanisms::{
    balle_delta, calibrate_gaussian_balle, calibrate_gaussian_dwork, PrivacyBudget, Sensitivity, DEFAULT_BALLE_TOL,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let s = Sensitivity::new(1.0)?;
    println!("{:>6} {:>8} {:>10} {:>10} {:>12}", "eps", "delta", "dwork", "balle", "delta(balle)");
    for eps in [0.1, 0.25, 0.5, 0.9] {
        for delta in [1e-6, 1e-4] {
            let b = PrivacyBudget::new(eps, delta)?;
            let dwork = calibrate_gaussian_dwork(b, s)?.sigma();
            let balle = calibrate_gaussian_balle(b, s, DEFAULT_BALLE_TOL)?.sigma();
            let check = balle_delta(eps, balle, 1.0);
            println!("{eps:>6} {delta:>8.0e} {dwork:>10.4} {balle:>10.4} {check:>12.3e}");
        }
    }
    // the exact calibration also covers epsilon >= 1
    let wide = calibrate_gaussian_balle(PrivacyBudget::new(2.0, 1e-5)?, s, DEFAULT_BALLE_TOL)?;
    println!("epsilon = 2, delta = 1e-5: sigma = {:.4}", wide.sigma());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
