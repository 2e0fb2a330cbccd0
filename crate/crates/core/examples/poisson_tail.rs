//! SIR tail of a Poisson network with Rayleigh fading, compared with the exact
//! coverage probability and with the limit of θ^{1/β} P(SIR > θ).

use sirtail::asymquad::poisson_constant;
use sirtail::fading::FadingSpec;
use sirtail::ppsampler::ProcessModel;
use sirtail::reference::poisson_rayleigh_coverage;
use sirtail::sirmc::{estimate_sir_tail, log_grid, McConfig};

fn main() -> sirtail::Result<()> {
    let beta = 2.0;
    let model = ProcessModel::poisson(1.0)?;
    let grid = log_grid(1.0, 1e4, 9);
    let cfg = McConfig::new(200_000, 300, 11);
    let curve = estimate_sir_tail(&model, &FadingSpec::rayleigh(), beta, &grid, &cfg)?;
    let limit = poisson_constant(beta)?.value;

    println!("{:>10} {:>10} {:>22} {:>10} {:>10}", "theta", "p_hat", "95% CI", "exact", "scaled");
    for e in &curve.entries {
        println!(
            "{:>10.1} {:>10.5} [{:>9.5}, {:>9.5}] {:>10.5} {:>10.4}",
            e.theta,
            e.p_hat,
            e.ci_low,
            e.ci_high,
            poisson_rayleigh_coverage(e.theta, beta)?,
            e.scaled
        );
    }
    println!("limit of the scaled tail: {limit:.6}");
    if let Some((slope, se)) = curve.scaled_slope(100.0) {
        println!("slope of scaled tail in log θ beyond 100: {slope:.2e} ± {se:.1e}");
    }
    Ok(())
}
