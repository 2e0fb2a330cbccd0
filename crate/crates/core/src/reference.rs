//! Independent oracles used by the acceptance checks.

use crate::error::{invalid, Result};
use crate::quad::integrate_pieces;
use crate::special::reg_lower_gamma;

/// `P(SIR > θ)` for a Poisson network with Rayleigh fading,
/// `1/(1 + ρ)` with `ρ = θ^{1/β} ∫_{θ^{−1/β}}^∞ du/(1 + u^β)`.
///
/// The integral is taken by quadrature after `u = θ^{−1/β}/s`, so this does
/// not rely on any closed form.
pub fn poisson_rayleigh_coverage(theta: f64, beta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite() && beta > 1.0 && beta.is_finite()) {
        return Err(invalid(format!("coverage needs θ > 0 and β > 1 (got {theta}, {beta})")));
    }
    let c = theta.powf(-1.0 / beta);
    // ∫_c^∞ du/(1+u^β) = ∫_0^1 c s^{β−2}/(s^β + c^β) ds, then s = v² to
    // soften the endpoint singularity for β < 2
    let cb = c.powf(beta);
    let f = |v: f64| if v == 0.0 { 0.0 } else { 2.0 * c * v.powf(2.0 * beta - 3.0) / (v.powf(2.0 * beta) + cb) };
    // the integrand turns over at v = √c; cut geometrically around it
    let mut cuts = vec![0.0];
    let mut x = c.sqrt() / 16.0;
    while x < 1.0 {
        cuts.push(x);
        x *= 2.0;
    }
    cuts.push(1.0);
    let scale = c.powf(1.0 - beta) / (beta - 1.0);
    let tail = integrate_pieces(f, &cuts, 1e-12 * scale)?.value;
    Ok(1.0 / (1.0 + tail / c))
}

/// `Σ_{i=1}^{n} P(Gamma(i, 1) ≤ r²)`: expected number of Ginibre points in
/// the disk of radius `r` (first `n` Kostlan radii).
pub fn kostlan_mean_count(r: f64, n: usize) -> f64 {
    (1..=n).map(|i| reg_lower_gamma(i as f64, r * r)).sum()
}

/// `r² − (1 − e^{−r²})`: expected number of Palm points in the disk,
/// the origin excluded.
pub fn palm_mean_count(r: f64) -> f64 {
    let x = r * r;
    x + (-x).exp_m1()
}
