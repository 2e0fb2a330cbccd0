//! Fading can only lower the constant relative to its deterministic value,
//! by at most the factor E[H^{1/β}]/(E H)^{1/β}.

use sirtail::asymquad::{ginibre_constant, ginibre_nakagami_constant, jensen_coefficient, jensen_lower_bound, QuadConfig};
use sirtail::fading::FadingSpec;

fn main() -> sirtail::Result<()> {
    let cfg = QuadConfig::default();
    for beta in [1.5, 2.0, 3.0, 4.0] {
        let delta = ginibre_constant(&FadingSpec::Deterministic, beta, &cfg)?;
        println!("β = {beta}: C(β, δ₁) = {:.6}", delta.value);
        for m in [0.5, 1.0, 2.0, 4.0] {
            let h = FadingSpec::nakagami(m)?;
            let c = ginibre_nakagami_constant(beta, m, &cfg)?;
            let lower = jensen_lower_bound(&h, beta, &delta)?;
            println!(
                "  m = {m:<4} coefficient {:.4}  bound {:.6} ≤ C = {:.6}",
                jensen_coefficient(&h, beta)?,
                lower.value,
                c.value
            );
        }
    }
    Ok(())
}
