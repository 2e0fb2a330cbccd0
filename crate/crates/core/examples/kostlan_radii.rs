//! Ginibre radii through Kostlan's theorem: squared moduli are independent
//! Gamma(i) variables, or Gamma(i+1) under the Palm law.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sirtail::ppsampler::{sample_ginibre_radii, KostlanSampler};
use sirtail::reference::{kostlan_mean_count, palm_mean_count};

fn main() -> sirtail::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let first = sample_ginibre_radii(true, 8, &mut rng)?;
    println!("eight nearest Palm radii: {:.3?}", first.radii);

    let n = 100;
    let reps = 50_000;
    let stationary = KostlanSampler::new(false, n)?;
    let palm = KostlanSampler::new(true, n)?;
    let mut q = vec![0.0; n];
    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "r", "count", "expected", "palm count", "expected");
    for r in [0.5, 1.0, 2.0, 3.0] {
        let mut count = [0usize; 2];
        for _ in 0..reps {
            for (j, s) in [&stationary, &palm].iter().enumerate() {
                s.sq_moduli_into(&mut q, &mut rng);
                count[j] += q.iter().filter(|&&x| x <= r * r).count();
            }
        }
        println!(
            "{r:>5} {:>12.4} {:>12.4} {:>12.4} {:>12.4}",
            count[0] as f64 / reps as f64,
            kostlan_mean_count(r, n),
            count[1] as f64 / reps as f64,
            palm_mean_count(r)
        );
    }
    Ok(())
}
