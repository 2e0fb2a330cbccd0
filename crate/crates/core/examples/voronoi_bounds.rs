//! Empirical P⁰(R(o) > r) for Poisson and Ginibre cells against Calka's
//! bound and the petal bounds, and the Ginibre kernel identity.

use sirtail::ppsampler::ProcessModel;
use sirtail::voronoi::{
    calka_poisson_bound, circumscribed_radius_samples, generic_petal_bound, ginibre_crossing, ginibre_kernel_l2,
    ginibre_petal_bound,
};

fn main() -> sirtail::Result<()> {
    let poisson = circumscribed_radius_samples(&ProcessModel::poisson(1.0)?, 20_000, None, 1, 1)?;
    let ginibre = circumscribed_radius_samples(&ProcessModel::Ginibre, 1_000, None, 1, 1)?;
    println!("discard rates: poisson {:.4}, ginibre {:.4}", poisson.discard_rate(), ginibre.discard_rate());

    println!("{:>5} {:>10} {:>10} {:>10} | {:>10} {:>10} {:>10}", "r", "poisson", "calka", "petal", "ginibre", "7e^-(u∨v)", "petal");
    for j in 1..=12 {
        let r = 0.25 * j as f64;
        let calka = calka_poisson_bound(1.0, r);
        println!(
            "{r:>5.2} {:>10.5} {:>10} {:>10.5} | {:>10.5} {:>10.5} {:>10.5}",
            poisson.survival(r).0,
            if calka.valid { format!("{:.5}", calka.value) } else { "-".into() },
            generic_petal_bound(1.0, r),
            ginibre.survival(r).0,
            ginibre_petal_bound(r),
            generic_petal_bound(std::f64::consts::FRAC_1_PI, r)
        );
    }
    println!("u and v cross at r* = {:.6}", ginibre_crossing(1e-12));

    let k = ginibre_kernel_l2(6.0)?;
    println!("∫|K(0,z)|² over |z| ≤ 6: {:.15} (quadrature {:.15}), 1/π = {:.15}", k.closed_form, k.quadrature, std::f64::consts::FRAC_1_PI);
    Ok(())
}
