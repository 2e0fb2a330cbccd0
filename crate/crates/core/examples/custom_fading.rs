//! A user-defined propagation effect: Rayleigh fading on top of two-level
//! shadowing, H = a·E with probability p and b·E otherwise (E ~ Exp(1)).
//! Both engines accept it once the Laplace transform, moments, tail and a
//! decay certificate are supplied.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use sirtail::asymquad::{ginibre_constant, jensen_coefficient, QuadConfig};
use sirtail::fading::{condition_b_params, LaplaceDecay, PropagationEffect};
use sirtail::ppsampler::ProcessModel;
use sirtail::sirmc::{estimate_palm_constant, McConfig};
use sirtail::special::gamma;

#[derive(Debug, Clone, Copy)]
struct ShadowedRayleigh {
    p: f64,
    a: f64,
    b: f64,
}

impl Distribution<f64> for ShadowedRayleigh {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let level = if rng.gen::<f64>() < self.p { self.a } else { self.b };
        level * rng.sample::<f64, _>(Exp1)
    }
}

impl PropagationEffect for ShadowedRayleigh {
    type Sampler = ShadowedRayleigh;

    fn laplace(&self, s: f64) -> f64 {
        self.p / (1.0 + self.a * s) + (1.0 - self.p) / (1.0 + self.b * s)
    }

    fn frac_moment(&self, q: f64) -> f64 {
        gamma(1.0 + q) * (self.p * self.a.powf(q) + (1.0 - self.p) * self.b.powf(q))
    }

    fn raw_moment(&self, k: u32) -> Option<f64> {
        let k_fact = (1..=k).map(f64::from).product::<f64>();
        Some(k_fact * (self.p * self.a.powi(k as i32) + (1.0 - self.p) * self.b.powi(k as i32)))
    }

    fn tail(&self, x: f64) -> f64 {
        self.p * (-x / self.a).exp() + (1.0 - self.p) * (-x / self.b).exp()
    }

    fn laplace_decay(&self) -> sirtail::Result<LaplaceDecay> {
        // 1/(1 + a s) ≤ 1/(a s)
        Ok(LaplaceDecay { alpha: 1.0, c_h: self.p / self.a + (1.0 - self.p) / self.b })
    }

    fn sampler(&self) -> Self {
        *self
    }

    fn label(&self) -> String {
        format!("shadowed-rayleigh:{}:{}:{}", self.p, self.a, self.b)
    }
}

fn main() -> sirtail::Result<()> {
    let h = ShadowedRayleigh { p: 0.3, a: 0.1, b: 1.3857142857142857 };
    let beta = 2.0;
    let decay = condition_b_params(&h, beta)?;
    println!("{}: E H = {:.4}, decay 𝓛(s) ≤ {:.3}·s^-{}", h.label(), h.mean().unwrap(), decay.c_h, decay.alpha);

    let quad = ginibre_constant(&h, beta, &QuadConfig::default())?;
    let mc = estimate_palm_constant(&ProcessModel::Ginibre, &h, beta, &McConfig::new(50_000, 500, 5))?;
    println!("ginibre constant: quadrature {:.6} [{:.6}, {:.6}]", quad.value, quad.bracket_low, quad.bracket_high);
    println!("                  palm MC    {:.6} ± {:.6} (z = {:.2})", mc.value, mc.std_error, quad.z_gap(&mc));
    println!("Jensen coefficient {:.4}", jensen_coefficient(&h, beta)?);
    Ok(())
}
