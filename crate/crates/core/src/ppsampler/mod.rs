//! Base-station point processes in stationary and reduced-Palm form.
//!
//! Distances are what the SIR depends on, so most samplers return only the
//! ordered radii. Planar samples are needed for Voronoi geometry and are
//! produced by [`planar`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub mod planar;

pub use planar::{
    sample_ginibre_planar_palm, sample_poisson_planar_palm, GinibrePlanarSampler, PlanarPalmSample, DEFAULT_EIGEN_CUTOFF,
    DEFAULT_PROPOSAL_CAP,
};

/// Base-station deployment model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProcessModel {
    /// Homogeneous Poisson process with `intensity` points per unit area.
    Poisson { intensity: f64 },
    /// Ginibre process with intensity `1/π`.
    Ginibre,
    /// Mixed, randomly shifted lattice `(ℤ × Tℤ) + U_T` with `T` of density
    /// `(a−1)t^{-a}` on `[1, ∞)`.
    #[serde(rename = "lattice")]
    LatticeMix { shape: f64 },
}

impl ProcessModel {
    pub fn poisson(intensity: f64) -> Result<Self> {
        let m = ProcessModel::Poisson { intensity };
        m.validate()?;
        Ok(m)
    }

    pub fn lattice(shape: f64) -> Result<Self> {
        let m = ProcessModel::LatticeMix { shape };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ProcessModel::Poisson { intensity } if !(intensity > 0.0 && intensity.is_finite()) => {
                Err(invalid(format!("Poisson intensity must be finite and > 0 (got {intensity})")))
            }
            ProcessModel::LatticeMix { shape } if !(shape > 1.0 && shape < 2.0) => {
                Err(invalid(format!("lattice shape must lie in (1, 2) (got {shape})")))
            }
            _ => Ok(()),
        }
    }

    /// Points per unit area.
    pub fn intensity(&self) -> f64 {
        match *self {
            ProcessModel::Poisson { intensity } => intensity,
            ProcessModel::Ginibre => std::f64::consts::FRAC_1_PI,
            ProcessModel::LatticeMix { shape } => (shape - 1.0) / shape,
        }
    }
}

impl fmt::Display for ProcessModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ProcessModel::Poisson { intensity } => write!(f, "poisson:{intensity}"),
            ProcessModel::Ginibre => write!(f, "ginibre"),
            ProcessModel::LatticeMix { shape } => write!(f, "lattice:{shape}"),
        }
    }
}

/// Parses `poisson[:λ]`, `ginibre` and `lattice:<a>`.
impl FromStr for ProcessModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |x: &str| -> Result<f64> {
            x.parse::<f64>()
                .map_err(|_| Error::Config(format!("bad number '{x}' in model '{s}'")))
        };
        match parts.as_slice() {
            ["poisson"] => ProcessModel::poisson(1.0),
            ["poisson", l] => ProcessModel::poisson(num(l)?),
            ["ginibre"] => Ok(ProcessModel::Ginibre),
            ["lattice", a] | ["latticemix", a] => ProcessModel::lattice(num(a)?),
            _ => Err(Error::Config(format!(
                "unknown model '{s}' (expected poisson:<λ> | ginibre | lattice:<a>)"
            ))),
        }
    }
}

/// Ascending distances from the origin to the first `N` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiiSample {
    pub radii: Vec<f64>,
    pub model: ProcessModel,
    /// Reduced Palm (origin atom removed) rather than stationary.
    pub palm: bool,
    /// Mean number of points per unit area beyond the last radius.
    pub residual_rate: f64,
}

impl RadiiSample {
    pub fn last(&self) -> f64 {
        *self.radii.last().expect("radii are non-empty")
    }
}

/// Writes squared Poisson radii `Γ_i / (λπ)` into `out` (already sorted).
#[inline]
pub fn poisson_sq_radii_into<R: Rng + ?Sized>(intensity: f64, out: &mut [f64], rng: &mut R) {
    let scale = 1.0 / (intensity * std::f64::consts::PI);
    let mut acc = 0.0;
    for slot in out.iter_mut() {
        acc += rng.sample::<f64, _>(Exp1);
        *slot = acc * scale;
    }
}

/// Poisson radii. By Slivnyak's theorem the same law serves the stationary
/// process and its reduced Palm version.
pub fn sample_poisson_radii<R: Rng + ?Sized>(intensity: f64, n: usize, rng: &mut R) -> Result<RadiiSample> {
    let model = ProcessModel::poisson(intensity)?;
    if n == 0 {
        return Err(invalid("need at least one radius"));
    }
    let mut sq = vec![0.0; n];
    poisson_sq_radii_into(intensity, &mut sq, rng);
    Ok(RadiiSample {
        radii: sq.into_iter().map(f64::sqrt).collect(),
        model,
        palm: true,
        residual_rate: intensity,
    })
}

/// Independent Gamma draws whose square roots give the Ginibre moduli:
/// shapes `i + 1` (Palm) or `i` (stationary) for `i = 1..=N`.
#[derive(Debug, Clone)]
pub struct KostlanSampler {
    palm: bool,
    shapes: Vec<Gamma<f64>>,
}

impl KostlanSampler {
    pub fn new(palm: bool, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("need at least one radius"));
        }
        let offset = if palm { 1.0 } else { 0.0 };
        let shapes = (1..=n)
            .map(|i| Gamma::new(i as f64 + offset, 1.0).expect("positive shape"))
            .collect();
        Ok(KostlanSampler { palm, shapes })
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn palm(&self) -> bool {
        self.palm
    }

    /// Squared moduli in index order (not sorted).
    #[inline]
    pub fn sq_moduli_into<R: Rng + ?Sized>(&self, out: &mut [f64], rng: &mut R) {
        for (slot, g) in out.iter_mut().zip(&self.shapes) {
            *slot = g.sample(rng);
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RadiiSample {
        let mut sq = vec![0.0; self.shapes.len()];
        self.sq_moduli_into(&mut sq, rng);
        sq.sort_by(f64::total_cmp);
        RadiiSample {
            radii: sq.into_iter().map(f64::sqrt).collect(),
            model: ProcessModel::Ginibre,
            palm: self.palm,
            residual_rate: std::f64::consts::FRAC_1_PI,
        }
    }
}

/// Ginibre radii via Kostlan's decomposition.
pub fn sample_ginibre_radii<R: Rng + ?Sized>(palm: bool, n: usize, rng: &mut R) -> Result<RadiiSample> {
    Ok(KostlanSampler::new(palm, n)?.sample(rng))
}

/// Spacing `T` of the mixed lattice drawn under the Palm law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticePalmDraw {
    pub t: f64,
    pub shape: f64,
}

impl LatticePalmDraw {
    /// Circumradius of the rectangular cell `[−1/2, 1/2] × [−T/2, T/2]`.
    pub fn circumradius(&self) -> f64 {
        (1.0 + self.t * self.t).sqrt() / 2.0
    }
}

/// Under the Palm law `T` is Pareto with `P⁰(T > t) = t^{-a}` (the stationary
/// density `(a−1)t^{-a}` reweighted by `1/T`).
pub fn sample_lattice_palm<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<LatticePalmDraw> {
    ProcessModel::lattice(shape)?;
    let u: f64 = 1.0 - rng.gen::<f64>();
    Ok(LatticePalmDraw { t: u.powf(-1.0 / shape), shape })
}

/// Stationary draw of `T` (density `(a−1)t^{-a}` on `[1, ∞)`).
pub fn sample_lattice_stationary<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    ProcessModel::lattice(shape)?;
    let u: f64 = 1.0 - rng.gen::<f64>();
    Ok(u.powf(-1.0 / (shape - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::special::reg_lower_gamma;
    use crate::stats::{ks_critical_1pct, ks_distance, MeanAcc};
    use std::f64::consts::PI;

    #[test]
    fn model_parsing_and_intensity() {
        assert_eq!("poisson:2".parse::<ProcessModel>().unwrap().intensity(), 2.0);
        assert!(("ginibre".parse::<ProcessModel>().unwrap().intensity() - 1.0 / PI).abs() < 1e-16);
        assert!(("lattice:1.5".parse::<ProcessModel>().unwrap().intensity() - 1.0 / 3.0).abs() < 1e-15);
        assert!("poisson:0".parse::<ProcessModel>().is_err());
        assert!("lattice:2.5".parse::<ProcessModel>().is_err());
        assert!("hardcore".parse::<ProcessModel>().is_err());
    }

    #[test]
    fn invalid_parameters() {
        let mut rng = stream_rng(1, 0);
        assert!(sample_poisson_radii(-1.0, 10, &mut rng).is_err());
        assert!(sample_poisson_radii(1.0, 0, &mut rng).is_err());
        assert!(sample_ginibre_radii(true, 0, &mut rng).is_err());
        assert!(sample_lattice_palm(1.0, &mut rng).is_err());
        assert!(sample_lattice_palm(2.0, &mut rng).is_err());
    }

    #[test]
    fn single_radius() {
        let mut rng = stream_rng(1, 0);
        let s = sample_poisson_radii(1.0, 1, &mut rng).unwrap();
        assert_eq!(s.radii.len(), 1);
        assert!(s.radii[0] > 0.0);
    }

    #[test]
    fn nearest_poisson_radius_ks() {
        let mut rng = stream_rng(2, 0);
        let mut r1: Vec<f64> = (0..100_000)
            .map(|_| sample_poisson_radii(1.0, 1, &mut rng).unwrap().radii[0])
            .collect();
        let d = ks_distance(&mut r1, |r| 1.0 - (-PI * r * r).exp());
        assert!(d < ks_critical_1pct(100_000), "KS {d}");
    }

    #[test]
    fn poisson_kth_radius_survival() {
        let mut rng = stream_rng(3, 0);
        let n = 50_000;
        let r = 1.0;
        let mu = PI * r * r;
        for k in [1usize, 2, 5] {
            let hits = (0..n)
                .filter(|_| sample_poisson_radii(1.0, k, &mut rng).unwrap().radii[k - 1] > r)
                .count() as f64;
            let mut term = 1.0;
            let mut sum = 0.0;
            for j in 0..k {
                if j > 0 {
                    term *= mu / j as f64;
                }
                sum += term;
            }
            let p = (-mu).exp() * sum;
            let sd = (p * (1.0 - p) / n as f64).sqrt();
            assert!((hits / n as f64 - p).abs() < 3.0 * sd, "k={k}");
        }
    }

    #[test]
    fn poisson_mean_count_in_unit_disk() {
        // λ = 1/π → E #{r_i ≤ 1} = λπ = 1
        let mut rng = stream_rng(4, 0);
        let mut acc = MeanAcc::default();
        for _ in 0..100_000 {
            let s = sample_poisson_radii(1.0 / PI, 20, &mut rng).unwrap();
            acc.push(s.radii.iter().filter(|&&r| r <= 1.0).count() as f64);
        }
        assert!((acc.mean - 1.0).abs() < 3.0 * acc.std_error());
    }

    #[test]
    fn kostlan_first_index_mean() {
        let k = KostlanSampler::new(true, 5).unwrap();
        let mut rng = stream_rng(5, 0);
        let mut buf = [0.0; 5];
        let mut acc = MeanAcc::default();
        for _ in 0..100_000 {
            k.sq_moduli_into(&mut buf, &mut rng);
            acc.push(buf[0]);
        }
        assert!((acc.mean - 2.0).abs() < 3.0 * acc.std_error());
    }

    #[test]
    fn kostlan_count_identities() {
        let mut rng = stream_rng(6, 0);
        let n = 60;
        for &palm in &[true, false] {
            let ks = KostlanSampler::new(palm, n).unwrap();
            for &r in &[1.0f64, 2.0] {
                let mut acc = MeanAcc::default();
                for _ in 0..40_000 {
                    let s = ks.sample(&mut rng);
                    acc.push(s.radii.iter().filter(|&&x| x <= r).count() as f64);
                }
                let r2 = r * r;
                let want = if palm { r2 - (1.0 - (-r2).exp()) } else { r2 };
                assert!((acc.mean - want).abs() < 3.0 * acc.std_error(), "palm={palm} r={r}");
            }
        }
        let exact: f64 = (1..=100).map(|i| reg_lower_gamma(i as f64, 4.0)).sum();
        assert!((exact - 4.0).abs() < 1e-8);
    }

    #[test]
    fn lattice_palm_survival_and_mean() {
        let mut rng = stream_rng(7, 0);
        let n = 200_000;
        let mut surv = 0usize;
        let mut acc = MeanAcc::default();
        for _ in 0..n {
            let d = sample_lattice_palm(1.5, &mut rng).unwrap();
            assert!(d.t >= 1.0);
            if d.t > 2.0 {
                surv += 1;
            }
            acc.push(d.t);
        }
        let p = 2f64.powf(-1.5);
        let sd = (p * (1.0 - p) / n as f64).sqrt();
        assert!((surv as f64 / n as f64 - p).abs() < 3.0 * sd);
        // Pareto(1.5) has infinite variance; the sample mean converges slowly
        // from below, so only a loose check against E⁰T = 3 is meaningful.
        assert!((acc.mean - 3.0).abs() < 0.3, "mean {}", acc.mean);
        let d = LatticePalmDraw { t: 1.0, shape: 1.5 };
        assert!((d.circumradius() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = sample_ginibre_radii(true, 50, &mut stream_rng(9, 2)).unwrap();
        let b = sample_ginibre_radii(true, 50, &mut stream_rng(9, 2)).unwrap();
        assert_eq!(a, b);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn radii_strictly_sorted(seed in any::<u64>(), n in 1usize..300, lambda in 0.01f64..100.0, palm in any::<bool>()) {
                let mut rng = stream_rng(seed, 0);
                for s in [sample_poisson_radii(lambda, n, &mut rng).unwrap(), sample_ginibre_radii(palm, n, &mut rng).unwrap()] {
                    prop_assert!(s.radii[0] > 0.0);
                    prop_assert!(s.radii.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }
}
