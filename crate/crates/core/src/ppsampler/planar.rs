//! Planar reduced-Palm samples on a disk `D_R` centred at the origin.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use super::ProcessModel;
use crate::error::{invalid, Error, Result};
use crate::special::{ln_gamma, reg_lower_gamma};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarPalmSample {
    /// Points other than the origin atom.
    pub points: Vec<[f64; 2]>,
    pub window_radius: f64,
    pub model: ProcessModel,
}

/// Reduced-Palm Poisson on `D_R`: a Poisson(λπR²) number of uniform points.
pub fn sample_poisson_planar_palm<R: Rng + ?Sized>(
    intensity: f64,
    window_radius: f64,
    rng: &mut R,
) -> Result<PlanarPalmSample> {
    let model = ProcessModel::poisson(intensity)?;
    if !(window_radius > 0.0 && window_radius.is_finite()) {
        return Err(invalid(format!("window radius must be > 0 (got {window_radius})")));
    }
    let mean = intensity * std::f64::consts::PI * window_radius * window_radius;
    let count = Poisson::new(mean).map(|p| p.sample(rng) as usize).unwrap_or(0);
    let points = (0..count)
        .map(|_| {
            let r = window_radius * rng.gen::<f64>().sqrt();
            let phi = std::f64::consts::TAU * rng.gen::<f64>();
            [r * phi.cos(), r * phi.sin()]
        })
        .collect();
    Ok(PlanarPalmSample { points, window_radius, model })
}

pub const DEFAULT_EIGEN_CUTOFF: f64 = 1e-12;
pub const DEFAULT_PROPOSAL_CAP: u64 = 1_000_000;

#[derive(Debug, Clone)]
struct Mode {
    k: u32,
    /// Eigenvalue `P(k+1, R²)` of the Palm kernel restricted to `D_R`.
    kappa: f64,
    /// `−½ ln(π γ(k+1, R²))`, the log normalization of `z^k e^{-|z|²/2}`.
    ln_norm: f64,
    gamma: Gamma<f64>,
}

/// Exact sampler for the reduced-Palm Ginibre process restricted to `D_R`.
///
/// The Palm kernel is the Ginibre kernel with its constant mode removed;
/// on the disk it diagonalizes in `z^k e^{-|z|²/2}`, `k ≥ 1`, with eigenvalues
/// `P(k+1, R²)`. Sampling is the usual two-phase scheme: Bernoulli mode
/// selection, then sequential placement by rejection against the projection
/// kernel density.
#[derive(Debug, Clone)]
pub struct GinibrePlanarSampler {
    window_radius: f64,
    modes: Vec<Mode>,
    dropped_mass: f64,
    proposal_cap: u64,
}

impl GinibrePlanarSampler {
    pub fn new(window_radius: f64, eigen_cutoff: f64) -> Result<Self> {
        if !(window_radius > 0.0 && window_radius.is_finite()) {
            return Err(invalid(format!("window radius must be > 0 (got {window_radius})")));
        }
        if !(eigen_cutoff > 0.0 && eigen_cutoff < 1.0) {
            return Err(invalid(format!("eigenvalue cutoff must lie in (0, 1) (got {eigen_cutoff})")));
        }
        let r2 = window_radius * window_radius;
        let mut modes = Vec::new();
        let mut dropped_mass = 0.0;
        let mut k = 1u32;
        loop {
            let kappa = reg_lower_gamma(k as f64 + 1.0, r2);
            if kappa < eigen_cutoff {
                dropped_mass += kappa;
                if kappa < 1e-300 || kappa < dropped_mass * 1e-17 {
                    break;
                }
            } else {
                let ln_lower = kappa.ln() + ln_gamma(k as f64 + 1.0);
                modes.push(Mode {
                    k,
                    kappa,
                    ln_norm: -0.5 * (std::f64::consts::PI.ln() + ln_lower),
                    gamma: Gamma::new(k as f64 + 1.0, 1.0).expect("positive shape"),
                });
            }
            k += 1;
        }
        Ok(GinibrePlanarSampler {
            window_radius,
            modes,
            dropped_mass,
            proposal_cap: DEFAULT_PROPOSAL_CAP,
        })
    }

    pub fn with_proposal_cap(mut self, cap: u64) -> Self {
        self.proposal_cap = cap;
        self
    }

    pub fn window_radius(&self) -> f64 {
        self.window_radius
    }

    /// Expected count `Σ κ_k` over retained modes.
    pub fn expected_count(&self) -> f64 {
        self.modes.iter().map(|m| m.kappa).sum()
    }

    /// Eigenvalue mass of the discarded modes.
    pub fn dropped_mass(&self) -> f64 {
        self.dropped_mass
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PlanarPalmSample> {
        let selected: Vec<&Mode> = self.modes.iter().filter(|m| rng.gen::<f64>() < m.kappa).collect();
        let n = selected.len();
        let mut points = Vec::with_capacity(n);
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        let r2_max = self.window_radius * self.window_radius;

        while points.len() < n {
            let mut proposals = 0u64;
            loop {
                if proposals >= self.proposal_cap {
                    return Err(Error::SamplerStall {
                        proposals,
                        placed: points.len(),
                        target: n,
                    });
                }
                proposals += 1;
                // proposal density ‖v(z)‖²/n: uniform mode, then its radial law
                let mode = selected[rng.gen_range(0..n)];
                let r2 = truncated_gamma(mode, r2_max, rng);
                let phi = std::f64::consts::TAU * rng.gen::<f64>();
                let r = r2.sqrt();
                let z = Complex64::from_polar(r, phi);
                let ln_r = r.ln();
                let mut norm2 = 0.0;
                for (slot, m) in v.iter_mut().zip(&selected) {
                    let ln_mag = m.k as f64 * ln_r - 0.5 * r2 + m.ln_norm;
                    *slot = Complex64::from_polar(ln_mag.exp(), m.k as f64 * phi);
                    norm2 += slot.norm_sqr();
                }
                let mut resid = norm2;
                for e in &basis {
                    resid -= inner(e, &v).norm_sqr();
                }
                if rng.gen::<f64>() * norm2 < resid {
                    // Gram–Schmidt, applied twice for stability
                    for _ in 0..2 {
                        for e in &basis {
                            let c = inner(e, &v);
                            for (vi, ei) in v.iter_mut().zip(e) {
                                *vi -= c * ei;
                            }
                        }
                    }
                    let nrm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                    basis.push(v.iter().map(|c| c / nrm).collect());
                    points.push([z.re, z.im]);
                    break;
                }
            }
        }
        Ok(PlanarPalmSample {
            points,
            window_radius: self.window_radius,
            model: ProcessModel::Ginibre,
        })
    }
}

/// `Σ conj(a_j) b_j`
#[inline]
fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `Gamma(k+1, 1)` conditioned on `[0, r2_max]`.
fn truncated_gamma<R: Rng + ?Sized>(mode: &Mode, r2_max: f64, rng: &mut R) -> f64 {
    let k = mode.k as f64;
    let c = k - r2_max;
    if mode.kappa >= 0.05 || c < 0.5 {
        loop {
            let y = mode.gamma.sample(rng);
            if y <= r2_max {
                return y;
            }
        }
    }
    // Most of the mass sits near the upper end: with x = R²(1 − w) the
    // density in w is ∝ (1−w)^k e^{R² w} ≤ e^{−c w}, c = k − R².
    let tail = -(-c).exp_m1();
    loop {
        let u: f64 = rng.gen();
        let w = -(-u * tail).ln_1p() / c;
        let accept = (k * ((-w).ln_1p() + w)).exp();
        if rng.gen::<f64>() < accept {
            return r2_max * (1.0 - w);
        }
    }
}

/// One-shot helper around [`GinibrePlanarSampler`].
pub fn sample_ginibre_planar_palm<R: Rng + ?Sized>(
    window_radius: f64,
    eigen_cutoff: f64,
    rng: &mut R,
) -> Result<PlanarPalmSample> {
    GinibrePlanarSampler::new(window_radius, eigen_cutoff)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::stats::MeanAcc;
    use std::f64::consts::PI;

    #[test]
    fn rejects_bad_parameters() {
        assert!(GinibrePlanarSampler::new(0.0, 1e-12).is_err());
        assert!(GinibrePlanarSampler::new(2.0, 1.5).is_err());
        assert!(sample_poisson_planar_palm(1.0, -1.0, &mut stream_rng(0, 0)).is_err());
    }

    #[test]
    fn eigenvalue_sum_matches_palm_mean_count() {
        for r in [1.0f64, 3.0, 6.0] {
            let s = GinibrePlanarSampler::new(r, DEFAULT_EIGEN_CUTOFF).unwrap();
            let want = r * r - (1.0 - (-r * r).exp());
            assert!((s.expected_count() + s.dropped_mass() - want).abs() < 1e-10);
            assert!(s.dropped_mass() < 1e-9 * want.max(1e-300) || s.dropped_mass() < 1e-11);
        }
    }

    #[test]
    fn tiny_window_is_almost_always_empty() {
        let s = GinibrePlanarSampler::new(1e-3, DEFAULT_EIGEN_CUTOFF).unwrap();
        let mut rng = stream_rng(1, 1);
        assert!((0..1000).all(|_| s.sample(&mut rng).unwrap().points.is_empty()));
        let mut rng = stream_rng(1, 2);
        assert!((0..1000).all(|_| sample_poisson_planar_palm(1.0, 1e-4, &mut rng).unwrap().points.is_empty()));
    }

    #[test]
    fn samples_inside_window_and_simple() {
        let s = GinibrePlanarSampler::new(4.0, DEFAULT_EIGEN_CUTOFF).unwrap();
        let mut rng = stream_rng(2, 0);
        for _ in 0..50 {
            let p = s.sample(&mut rng).unwrap();
            for q in &p.points {
                assert!(q[0].hypot(q[1]) <= 4.0 + 1e-12);
            }
            for (i, a) in p.points.iter().enumerate() {
                for b in &p.points[i + 1..] {
                    assert!(a != b);
                }
            }
        }
    }

    #[test]
    fn radial_intensity_matches_palm_density() {
        // E #(annulus a<|z|≤b) = ∫ (1/π)(1 − e^{−|z|²}) dz = b² − a² − (e^{−a²} − e^{−b²})
        let s = GinibrePlanarSampler::new(4.0, DEFAULT_EIGEN_CUTOFF).unwrap();
        let mut rng = stream_rng(3, 0);
        let edges = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0];
        let mut accs = vec![MeanAcc::default(); edges.len() - 1];
        let mut total = MeanAcc::default();
        for _ in 0..10_000 {
            let p = s.sample(&mut rng).unwrap();
            let mut counts = vec![0.0; accs.len()];
            for q in &p.points {
                let r = q[0].hypot(q[1]);
                let j = edges.windows(2).position(|w| r > w[0] && r <= w[1]).unwrap();
                counts[j] += 1.0;
            }
            for (a, c) in accs.iter_mut().zip(&counts) {
                a.push(*c);
            }
            total.push(p.points.len() as f64);
        }
        for (j, a) in accs.iter().enumerate() {
            let (lo, hi) = (edges[j], edges[j + 1]);
            let want = hi * hi - lo * lo - ((-lo * lo).exp() - (-hi * hi).exp());
            assert!((a.mean - want).abs() < 3.0 * a.std_error() + 1e-9, "annulus {j}: {} vs {want}", a.mean);
        }
        assert!((total.mean - (16.0 - (1.0 - (-16f64).exp()))).abs() < 3.0 * total.std_error() + 1e-9);
    }

    #[test]
    fn poisson_planar_counts() {
        let mut rng = stream_rng(4, 0);
        let mut total = MeanAcc::default();
        let (mut sx, mut sy, mut sxy, n) = (0.0, 0.0, 0.0, 20_000);
        for _ in 0..n {
            let p = sample_poisson_planar_palm(1.0, 2.0, &mut rng).unwrap();
            total.push(p.points.len() as f64);
            let inner = p.points.iter().filter(|q| q[0].hypot(q[1]) <= 1.0).count() as f64;
            let outer = p.points.len() as f64 - inner;
            sx += inner;
            sy += outer;
            sxy += inner * outer;
        }
        assert!((total.mean - 4.0 * PI).abs() < 3.0 * total.std_error());
        let nf = n as f64;
        let cov = sxy / nf - (sx / nf) * (sy / nf);
        // independent Poisson(π), Poisson(3π): sd of the sample covariance ≈ √(ab/n)
        let sd = (PI * 3.0 * PI / nf).sqrt();
        assert!(cov.abs() < 3.0 * sd, "cov {cov} sd {sd}");
    }

    #[test]
    fn stall_is_reported() {
        let s = GinibrePlanarSampler::new(3.0, DEFAULT_EIGEN_CUTOFF).unwrap().with_proposal_cap(1);
        let mut rng = stream_rng(5, 0);
        let stalled = (0..200).any(|_| matches!(s.sample(&mut rng), Err(Error::SamplerStall { .. })));
        assert!(stalled);
    }
}
