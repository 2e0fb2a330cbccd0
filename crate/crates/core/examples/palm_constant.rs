//! The asymptotic constant from Palm radii, for Poisson and Ginibre networks,
//! next to the deterministic values. Also checks that the Poisson constant
//! does not depend on the intensity.

use sirtail::asymquad::{ginibre_nakagami_constant, poisson_constant, QuadConfig};
use sirtail::fading::FadingSpec;
use sirtail::ppsampler::ProcessModel;
use sirtail::sirmc::{check_intensity_invariance, estimate_palm_constant, McConfig};

fn main() -> sirtail::Result<()> {
    let cfg = McConfig::new(50_000, 500, 3);
    for (m, beta) in [(1.0, 2.0), (2.0, 3.0), (0.5, 1.5)] {
        let h = FadingSpec::nakagami(m)?;
        let p = estimate_palm_constant(&ProcessModel::poisson(1.0)?, &h, beta, &cfg)?;
        let g = estimate_palm_constant(&ProcessModel::Ginibre, &h, beta, &cfg)?;
        let pq = poisson_constant(beta)?;
        let gq = ginibre_nakagami_constant(beta, m, &QuadConfig::default())?;
        println!("m = {m}, β = {beta}");
        println!("  poisson  MC {:.5} ± {:.5}  closed form {:.5}", p.value, p.std_error, pq.value);
        println!("  ginibre  MC {:.5} ± {:.5}  quadrature  {:.5}  (z = {:.2})", g.value, g.std_error, gq.value, g.z_gap(&gq));
        println!("  truncation bracket for the Ginibre MC: [{:.5}, {:.5}]", g.bracket_low, g.bracket_high);
    }

    let inv = check_intensity_invariance((1.0, 4.0), &FadingSpec::rayleigh(), 2.0, &cfg)?;
    println!(
        "λ = 1 vs 4: {:.5} vs {:.5}, {:.2} combined std errors apart",
        inv.first.value,
        inv.second.value,
        inv.difference.abs() / inv.combined_std_error
    );
    Ok(())
}
