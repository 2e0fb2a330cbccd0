//! Propagation effects `H` (fading and shadowing marks).
//!
//! The built-in family is the Gamma distribution plus the unit atom, which
//! covers Rayleigh (`Gamma(1, 1)`), Nakagami-m (`Gamma(m, 1/m)`) and the
//! no-fading case. Other distributions can be plugged into the engines by
//! implementing [`PropagationEffect`]; they must state their own Laplace
//! decay constants.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::special::{gamma_ratio, reg_upper_gamma};

/// Power-law decay certificate `𝓛_H(s) ≤ c_H s^{-α}` for `s ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceDecay {
    pub alpha: f64,
    pub c_h: f64,
}

/// Interface the Monte Carlo and quadrature engines need from `H`.
pub trait PropagationEffect: Sync + fmt::Debug {
    type Sampler: Distribution<f64> + Sync + Clone;

    /// `E e^{-sH}` for `s ≥ 0`.
    fn laplace(&self, s: f64) -> f64;

    /// `1 − 𝓛_H(s)`, evaluated without cancellation where possible.
    fn laplace_deficit(&self, s: f64) -> f64 {
        1.0 - self.laplace(s)
    }

    /// `E H^p`.
    fn frac_moment(&self, p: f64) -> f64;

    /// `E H^k` for integer `k ≥ 1`; `None` if infinite.
    fn raw_moment(&self, k: u32) -> Option<f64>;

    /// `P(H > x)`.
    fn tail(&self, x: f64) -> f64;

    /// Decay constants for the Laplace transform. User-supplied
    /// implementations must return them explicitly.
    fn laplace_decay(&self) -> Result<LaplaceDecay>;

    fn sampler(&self) -> Self::Sampler;

    fn label(&self) -> String;

    fn mean(&self) -> Option<f64> {
        self.raw_moment(1)
    }
}

/// Built-in distributions of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FadingConfig", into = "FadingConfig")]
pub enum FadingSpec {
    /// `H ≡ 1`.
    Deterministic,
    /// `Gamma(shape, scale)`, Laplace transform `(1 + scale·s)^{-shape}`.
    Gamma { shape: f64, scale: f64 },
}

impl FadingSpec {
    pub fn rayleigh() -> Self {
        FadingSpec::Gamma { shape: 1.0, scale: 1.0 }
    }

    pub fn nakagami(m: f64) -> Result<Self> {
        Self::gamma(m, 1.0 / m)
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite() && scale > 0.0 && scale.is_finite()) {
            return Err(invalid(format!(
                "gamma fading needs finite shape > 0 and scale > 0 (got {shape}, {scale})"
            )));
        }
        Ok(FadingSpec::Gamma { shape, scale })
    }
}

/// Serialized form, e.g. `{ kind = "nakagami", m = 2.0 }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FadingConfig {
    #[serde(alias = "delta", alias = "none")]
    Deterministic,
    Rayleigh,
    Nakagami { m: f64 },
    Gamma { shape: f64, scale: f64 },
}

impl TryFrom<FadingConfig> for FadingSpec {
    type Error = Error;

    fn try_from(c: FadingConfig) -> Result<Self> {
        match c {
            FadingConfig::Deterministic => Ok(FadingSpec::Deterministic),
            FadingConfig::Rayleigh => Ok(FadingSpec::rayleigh()),
            FadingConfig::Nakagami { m } => FadingSpec::nakagami(m),
            FadingConfig::Gamma { shape, scale } => FadingSpec::gamma(shape, scale),
        }
    }
}

impl From<FadingSpec> for FadingConfig {
    fn from(s: FadingSpec) -> Self {
        match s {
            FadingSpec::Deterministic => FadingConfig::Deterministic,
            FadingSpec::Gamma { shape, scale } => FadingConfig::Gamma { shape, scale },
        }
    }
}

/// Parses `rayleigh`, `deterministic`, `nakagami:<m>` and `gamma:<shape>:<scale>`.
impl FromStr for FadingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |x: &str| -> Result<f64> {
            x.parse::<f64>()
                .map_err(|_| Error::Config(format!("bad number '{x}' in fading '{s}'")))
        };
        match parts.as_slice() {
            ["rayleigh"] => Ok(FadingSpec::rayleigh()),
            ["deterministic"] | ["delta"] | ["none"] => Ok(FadingSpec::Deterministic),
            ["nakagami", m] => FadingSpec::nakagami(num(m)?),
            ["gamma", a, b] => FadingSpec::gamma(num(a)?, num(b)?),
            _ => Err(Error::Config(format!(
                "unknown fading '{s}' (expected rayleigh | deterministic | nakagami:<m> | gamma:<shape>:<scale>)"
            ))),
        }
    }
}

impl fmt::Display for FadingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FadingSpec::Deterministic => write!(f, "deterministic"),
            FadingSpec::Gamma { shape, scale } if shape == 1.0 && scale == 1.0 => write!(f, "rayleigh"),
            FadingSpec::Gamma { shape, scale } if (shape * scale - 1.0).abs() < 1e-15 => {
                write!(f, "nakagami:{shape}")
            }
            FadingSpec::Gamma { shape, scale } => write!(f, "gamma:{shape}:{scale}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum FadingSampler {
    One,
    Exp { scale: f64 },
    Gamma(Gamma<f64>),
}

impl Distribution<f64> for FadingSampler {
    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            FadingSampler::One => 1.0,
            FadingSampler::Exp { scale } => scale * rng.sample::<f64, _>(Exp1),
            FadingSampler::Gamma(g) => g.sample(rng),
        }
    }
}

impl PropagationEffect for FadingSpec {
    type Sampler = FadingSampler;

    fn laplace(&self, s: f64) -> f64 {
        match *self {
            FadingSpec::Deterministic => (-s).exp(),
            FadingSpec::Gamma { shape, scale } => (-shape * (scale * s).ln_1p()).exp(),
        }
    }

    fn laplace_deficit(&self, s: f64) -> f64 {
        match *self {
            FadingSpec::Deterministic => -(-s).exp_m1(),
            FadingSpec::Gamma { shape, scale } => -(-shape * (scale * s).ln_1p()).exp_m1(),
        }
    }

    fn frac_moment(&self, p: f64) -> f64 {
        match *self {
            FadingSpec::Deterministic => 1.0,
            FadingSpec::Gamma { shape, scale } => gamma_ratio(shape + p, shape) * scale.powf(p),
        }
    }

    fn raw_moment(&self, k: u32) -> Option<f64> {
        Some(match *self {
            FadingSpec::Deterministic => 1.0,
            FadingSpec::Gamma { shape, scale } => {
                (0..k).fold(1.0, |acc, j| acc * scale * (shape + j as f64))
            }
        })
    }

    fn tail(&self, x: f64) -> f64 {
        match *self {
            FadingSpec::Deterministic => {
                if x < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            FadingSpec::Gamma { shape, scale } => reg_upper_gamma(shape, x / scale),
        }
    }

    fn laplace_decay(&self) -> Result<LaplaceDecay> {
        Ok(match *self {
            // sup_{s≥1} s·e^{-s} = e^{-1}
            FadingSpec::Deterministic => LaplaceDecay { alpha: 1.0, c_h: (-1f64).exp() },
            FadingSpec::Gamma { shape, scale } => {
                LaplaceDecay { alpha: shape, c_h: scale.powf(-shape) }
            }
        })
    }

    fn sampler(&self) -> FadingSampler {
        match *self {
            FadingSpec::Deterministic => FadingSampler::One,
            FadingSpec::Gamma { shape: 1.0, scale } => FadingSampler::Exp { scale },
            FadingSpec::Gamma { shape, scale } => {
                FadingSampler::Gamma(Gamma::new(shape, scale).expect("validated at construction"))
            }
        }
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

/// `𝓛_H(s)`; rejects negative arguments.
pub fn laplace<H: PropagationEffect>(spec: &H, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(invalid(format!("Laplace transform needs s ≥ 0 (got {s})")));
    }
    Ok(spec.laplace(s))
}

/// `E H^p` for `p ∈ (0, 1]`.
pub fn frac_moment<H: PropagationEffect>(spec: &H, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("fractional moment order must lie in (0, 1] (got {p})")));
    }
    Ok(spec.frac_moment(p))
}

pub fn sample<H: PropagationEffect, R: Rng + ?Sized>(spec: &H, rng: &mut R) -> f64 {
    spec.sampler().sample(rng)
}

/// Checks `𝓛_H(s)·s^α ≤ c_H` on a log-spaced grid of `s ∈ [1, s_max]`.
pub fn certify_decay<H: PropagationEffect>(spec: &H, decay: LaplaceDecay, s_max: f64) -> bool {
    let steps = 400;
    (0..=steps).all(|j| {
        let s = s_max.powf(j as f64 / steps as f64);
        spec.laplace(s) * s.powf(decay.alpha) <= decay.c_h * (1.0 + 1e-12)
    })
}

/// Condition on `H` under which the tail asymptotics hold for path-loss
/// exponent `2β`: finite `E H^{1/β}` and power-law Laplace decay.
pub fn condition_b_params<H: PropagationEffect>(spec: &H, beta: f64) -> Result<LaplaceDecay> {
    if !(beta > 1.0) {
        return Err(invalid(format!("β must exceed 1 (got {beta})")));
    }
    let decay = spec.laplace_decay()?;
    if !(decay.alpha > 0.0 && decay.c_h > 0.0) {
        return Err(Error::ConditionViolated(format!(
            "{}: decay constants must be positive",
            spec.label()
        )));
    }
    if !spec.frac_moment(1.0 / beta).is_finite() {
        return Err(Error::ConditionViolated(format!("{}: E H^(1/β) is infinite", spec.label())));
    }
    if !certify_decay(spec, decay, 1e6) {
        return Err(Error::ConditionViolated(format!(
            "{}: 𝓛(s) ≤ {}·s^-{} fails on the certificate grid",
            spec.label(),
            decay.c_h,
            decay.alpha
        )));
    }
    Ok(decay)
}
