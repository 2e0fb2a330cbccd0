//! Planar Palm Ginibre samples on a disk and the Voronoi cell of the origin.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sirtail::ppsampler::GinibrePlanarSampler;
use sirtail::voronoi::cell_of_origin;

fn main() -> sirtail::Result<()> {
    let sampler = GinibrePlanarSampler::new(5.0, 1e-12)?;
    println!(
        "window 5: {} modes, expected {:.2} points, dropped mass {:.1e}",
        sampler.mode_count(),
        sampler.expected_count(),
        sampler.dropped_mass()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..3 {
        let s = sampler.sample(&mut rng)?;
        let cell = cell_of_origin(&s.points, s.window_radius)?;
        let nearest = s.points.iter().map(|p| p[0].hypot(p[1])).fold(f64::INFINITY, f64::min);
        println!(
            "{} points, nearest at {nearest:.3}, cell with {} vertices, area {:.3}, R(o) = {:.3}",
            s.points.len(),
            cell.vertices.len(),
            cell.area(),
            cell.circumradius
        );
    }
    Ok(())
}
