//! Deterministic Ginibre constants with error brackets, by the general
//! product form and by the Nakagami specialisation, plus the effect of
//! tightening every tolerance.

use std::time::Instant;

use sirtail::asymquad::{ginibre_constant, ginibre_nakagami_constant, GinibreProduct, QuadConfig};
use sirtail::fading::FadingSpec;

fn main() -> sirtail::Result<()> {
    let cfg = QuadConfig::default();
    println!("{:>5} {:>5} {:>14} {:>14} {:>10} {:>10}", "m", "beta", "general", "nakagami", "width", "secs");
    for m in [0.5, 1.0, 2.0, 4.0] {
        for beta in [1.5, 2.0, 3.0] {
            let t0 = Instant::now();
            let a = ginibre_constant(&FadingSpec::nakagami(m)?, beta, &cfg)?;
            let b = ginibre_nakagami_constant(beta, m, &cfg)?;
            println!(
                "{m:>5} {beta:>5} {:>14.10} {:>14.10} {:>10.1e} {:>10.3}",
                a.value,
                b.value,
                a.bracket_high - a.bracket_low,
                t0.elapsed().as_secs_f64()
            );
        }
    }

    let base = ginibre_constant(&FadingSpec::rayleigh(), 2.0, &cfg)?;
    let tight = ginibre_constant(&FadingSpec::rayleigh(), 2.0, &cfg.tightened(10.0))?;
    println!("Rayleigh, β = 2: {:.12} → {:.12} with 10× tighter tolerances", base.value, tight.value);

    // log of the infinite product and how many factors were taken explicitly
    let h = FadingSpec::rayleigh();
    let mut product = GinibreProduct::new(&h, 2.0, &cfg)?;
    for t in [0.1, 1.0, 4.0] {
        let p = product.log_product(t)?;
        println!("t = {t}: log ∏ g_i = {:.10} in [{:.10}, {:.10}], {} explicit factors", p.estimate, p.low, p.high, p.factors);
    }
    Ok(())
}
