//! A randomly stretched lattice whose typical cell has E⁰[R(o)²] = ∞: the
//! running means keep growing, while the Palm inversion formula still holds
//! for bounded functions.

use sirtail::ppsampler::ProcessModel;
use sirtail::voronoi::{condition_a_report, lattice_palm_identity, ConditionAConfig};

fn main() -> sirtail::Result<()> {
    for a in [1.5, 1.9] {
        let report = condition_a_report(&ProcessModel::lattice(a)?, &ConditionAConfig::new(100_000, 7))?;
        println!("a = {a}: verdict {:?}", report.verdict);
        for c in &report.checkpoints {
            println!(
                "  n = {:>6}: R(o)² {:>9.3}  |X_1|² {:.3}  |X_2|² {:.3}  |X_5|² {:.3}",
                c.n, c.mean_circumradius_sq, c.mean_sq_distance[0], c.mean_sq_distance[1], c.mean_sq_distance[2]
            );
        }
        let id = lattice_palm_identity(a, 200_000, 7, 1)?;
        println!(
            "  E⁰[1/(1+T)] = {:.5}; Palm {:.5} ± {:.5}; via stationary law {:.5} ± {:.5}",
            id.quadrature, id.palm_mean, id.palm_std_error, id.inverted_mean, id.inverted_std_error
        );
    }
    Ok(())
}
