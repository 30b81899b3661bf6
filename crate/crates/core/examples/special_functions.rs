// The exponential integral and the two noise laws the estimators use.

use dpratio::numerics::{ei, gaussian_cdf, gaussian_quantile, LaplaceDist};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>8} {:>22}", "x", "Ei(x)");
    for x in [-10.0, -1.0, -0.1, 0.1, 1.0, 10.0, 50.0] {
        println!("{x:>8} {:>22.15e}", ei(x)?);
    }

    // Ei'(x) = e^x / x
    let x = 2.5;
    let h = 1e-5;
    let slope = (ei(x + h)? - ei(x - h)?) / (2.0 * h);
    println!("central difference at {x}: {slope:.10} vs e^x/x = {:.10}", x.exp() / x);

    let lap = LaplaceDist::new(0.0, 2.0)?;
    println!("Lap(2): P(|L| <= 1) = {:.6}", lap.cdf(1.0) - lap.cdf(-1.0));
    let z = gaussian_quantile(0.975)?;
    println!("z_0.975 = {z:.10}, Phi(z) = {:.10}", gaussian_cdf(z));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
