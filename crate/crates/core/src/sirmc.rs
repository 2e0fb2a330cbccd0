//! Monte Carlo engines for the SIR tail and for the Palm-expectation form of
//! its asymptotic constant.
//!
//! Both engines truncate the point process to its first `N` points and
//! bracket the truncation: dropping far interferers can only raise the SIR,
//! and adding their mean-field contribution `λπ E[H] r_N^{2−2β}/(β−1)`
//! gives the second side.

use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimate::{ConstantEstimate, EstimateMeta, Method};
use crate::fading::{condition_b_params, PropagationEffect};
use crate::ppsampler::{poisson_sq_radii_into, KostlanSampler, ProcessModel};
use crate::rng::{shard_rng, Purpose, SimRng};
use crate::stats::{wilson_interval, MeanAcc, Z95};

/// Replicates per RNG stream.
pub const SHARD_SIZE: u64 = 8192;
/// `β` at or below this value is rejected: the residual interference
/// integral `r^{2−2β}/(β−1)` is too large for a finite truncation.
pub const BETA_MIN: f64 = 1.05;

pub const DEFAULT_POINTS: usize = 500;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Monte Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_samples: u64,
    /// Points kept per replicate.
    pub n_points: usize,
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    pub threads: usize,
}

impl McConfig {
    pub fn new(n_samples: u64, n_points: usize, seed: u64) -> Self {
        McConfig { n_samples, n_points, seed, threads: 1 }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

/// Runs `work(shard, replicates, rng)` over all shards and folds the results
/// in shard order.
pub(crate) fn run_sharded<T, W, M>(
    n_samples: u64,
    seed: u64,
    purpose: Purpose,
    threads: usize,
    work: W,
    mut merge: M,
) -> Result<T>
where
    T: Send,
    W: Fn(u64, u64, &mut SimRng) -> Result<T> + Sync,
    M: FnMut(T, T) -> T,
{
    let shards = n_samples.div_ceil(SHARD_SIZE).max(1);
    let job = |s: u64| {
        let count = SHARD_SIZE.min(n_samples - s * SHARD_SIZE.min(n_samples));
        let mut rng = shard_rng(seed, purpose, s);
        work(s, count, &mut rng)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let parts: Vec<Result<T>> = pool.install(|| (0..shards).into_par_iter().map(job).collect());
    let mut iter = parts.into_iter();
    let mut acc = iter.next().expect("at least one shard")?;
    for p in iter {
        acc = merge(acc, p?);
    }
    Ok(acc)
}

#[inline]
fn pow_neg(q: f64, beta: f64) -> f64 {
    if beta == 2.0 {
        1.0 / (q * q)
    } else if beta == 3.0 {
        1.0 / (q * q * q)
    } else if beta == 4.0 {
        let q2 = q * q;
        1.0 / (q2 * q2)
    } else {
        q.powf(-beta)
    }
}

/// SIR of one configuration given squared distances and marks; the nearest
/// point serves.
pub fn sir_of(sq_radii: &[f64], marks: &[f64], beta: f64) -> f64 {
    let serving = nearest_index(sq_radii);
    let mut interference = 0.0;
    for (i, (&q, &h)) in sq_radii.iter().zip(marks).enumerate() {
        if i != serving {
            interference += h * pow_neg(q, beta);
        }
    }
    marks[serving] * pow_neg(sq_radii[serving], beta) / interference
}

fn nearest_index(sq: &[f64]) -> usize {
    let mut best = 0;
    for (i, &q) in sq.iter().enumerate() {
        if q < sq[best] {
            best = i;
        }
    }
    best
}

/// Mean interference from points beyond squared radius `q_max`, treating
/// them as a homogeneous field of rate `rate`.
#[inline]
pub fn residual_mean(rate: f64, mean_h: f64, q_max: f64, beta: f64) -> f64 {
    rate * std::f64::consts::PI * mean_h * q_max.powf(1.0 - beta) / (beta - 1.0)
}

/// Radii generator for one model; squared distances are written unsorted.
enum RadiiSource {
    Poisson(f64),
    Kostlan(KostlanSampler),
}

impl RadiiSource {
    fn new(model: &ProcessModel, palm: bool, n: usize) -> Result<Self> {
        model.validate()?;
        match *model {
            ProcessModel::Poisson { intensity } => Ok(RadiiSource::Poisson(intensity)),
            ProcessModel::Ginibre => Ok(RadiiSource::Kostlan(KostlanSampler::new(palm, n)?)),
            ProcessModel::LatticeMix { .. } => Err(Error::UnsupportedModel(format!(
                "{model} (only its circumradius is sampled)"
            ))),
        }
    }

    #[inline]
    fn fill(&self, out: &mut [f64], rng: &mut SimRng) {
        match self {
            RadiiSource::Poisson(l) => poisson_sq_radii_into(*l, out, rng),
            RadiiSource::Kostlan(k) => k.sq_moduli_into(out, rng),
        }
    }
}

fn check_common<H: PropagationEffect>(model: &ProcessModel, fading: &H, beta: f64, n_points: usize) -> Result<f64> {
    if !(beta > BETA_MIN && beta.is_finite()) {
        return Err(invalid(format!("β must exceed {BETA_MIN} (got {beta})")));
    }
    if n_points < 2 {
        return Err(Error::NoInterferer(n_points));
    }
    model.validate()?;
    condition_b_params(fading, beta)?;
    fading
        .mean()
        .filter(|m| m.is_finite())
        .ok_or_else(|| Error::ConditionViolated(format!("{}: infinite mean", fading.label())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEntry {
    pub theta: f64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `θ^{1/β}·p̂`
    pub scaled: f64,
    /// Estimate without the residual-interference correction; an upper
    /// bracket for `p̂`.
    pub p_hat_truncated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCurve {
    pub beta: f64,
    pub model: ProcessModel,
    pub fading: String,
    pub entries: Vec<TailEntry>,
    pub n_samples: u64,
    pub n_points: usize,
    pub seed: u64,
}

impl TailCurve {
    /// Least-squares slope of `scaled` against `log θ` over entries with
    /// `θ ≥ theta_from`, with its standard error.
    pub fn scaled_slope(&self, theta_from: f64) -> Option<(f64, f64)> {
        let pts: Vec<(f64, f64, f64)> = self
            .entries
            .iter()
            .filter(|e| e.theta >= theta_from)
            .map(|e| (e.theta.ln(), e.scaled, e.theta.powf(1.0 / self.beta) * (e.ci_high - e.ci_low) / (2.0 * Z95)))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        // weighted least squares with the per-point Wilson half-widths
        let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, y, s) in &pts {
            let w = 1.0 / (s * s).max(1e-300);
            sw += w;
            sx += w * x;
            sy += w * y;
            sxx += w * x * x;
            sxy += w * x * y;
        }
        let det = sw * sxx - sx * sx;
        Some(((sw * sxy - sx * sy) / det, (sw / det).sqrt()))
    }
}

/// Default `θ` grid: 20 log-spaced values on `[10, 10⁵]`.
pub fn default_theta_grid() -> Vec<f64> {
    log_grid(10.0, 1e5, 20)
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|j| 10f64.powf(a + (b - a) * j as f64 / (n - 1) as f64))
        .collect()
}

#[derive(Debug, Clone)]
struct TailCounts {
    corrected: Vec<u64>,
    truncated: Vec<u64>,
}

impl TailCounts {
    fn merge(mut self, other: TailCounts) -> TailCounts {
        self.corrected.iter_mut().zip(&other.corrected).for_each(|(a, b)| *a += b);
        self.truncated.iter_mut().zip(&other.truncated).for_each(|(a, b)| *a += b);
        self
    }
}

/// Estimates `P(SIR > θ)` on `theta_grid` for the stationary process.
pub fn estimate_sir_tail<H: PropagationEffect>(
    model: &ProcessModel,
    fading: &H,
    beta: f64,
    theta_grid: &[f64],
    cfg: &McConfig,
) -> Result<TailCurve> {
    let mean_h = check_common(model, fading, beta, cfg.n_points)?;
    if theta_grid.is_empty()
        || theta_grid.iter().any(|&t| !(t > 0.0 && t.is_finite()))
        || theta_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(invalid("θ grid must be positive and strictly ascending"));
    }
    if cfg.n_samples == 0 {
        return Err(invalid("need at least one replicate"));
    }
    let source = RadiiSource::new(model, false, cfg.n_points)?;
    let rate = model.intensity();
    let marks = fading.sampler();
    let n = cfg.n_points;
    let bins = theta_grid.len() + 1;

    let counts = run_sharded(
        cfg.n_samples,
        cfg.seed,
        Purpose::Tail,
        cfg.threads,
        |_, count, rng| {
            let mut q = vec![0.0; n];
            // histogram of how many grid θ lie below each SIR
            let mut hist_c = vec![0u64; bins];
            let mut hist_t = vec![0u64; bins];
            for _ in 0..count {
                source.fill(&mut q, rng);
                let serving = nearest_index(&q);
                let mut signal = 0.0;
                let mut interference = 0.0;
                let mut q_max = 0.0f64;
                for (i, &qi) in q.iter().enumerate() {
                    let p = marks.sample(rng) * pow_neg(qi, beta);
                    if i == serving {
                        signal = p;
                    } else {
                        interference += p;
                    }
                    q_max = q_max.max(qi);
                }
                let resid = residual_mean(rate, mean_h, q_max, beta);
                let sir_c = signal / (interference + resid);
                let sir_t = signal / interference;
                hist_c[theta_grid.partition_point(|&t| t < sir_c)] += 1;
                hist_t[theta_grid.partition_point(|&t| t < sir_t)] += 1;
            }
            // P(SIR > θ_j) counts = Σ_{b > j} hist[b]
            let tail = |h: &[u64]| -> Vec<u64> {
                let mut out = vec![0u64; bins - 1];
                let mut acc = 0;
                for j in (0..bins - 1).rev() {
                    acc += h[j + 1];
                    out[j] = acc;
                }
                out
            };
            Ok(TailCounts { corrected: tail(&hist_c), truncated: tail(&hist_t) })
        },
        TailCounts::merge,
    )?;

    let entries = theta_grid
        .iter()
        .enumerate()
        .map(|(j, &theta)| {
            let k = counts.corrected[j];
            let p_hat = k as f64 / cfg.n_samples as f64;
            let (ci_low, ci_high) = wilson_interval(k, cfg.n_samples, Z95);
            TailEntry {
                theta,
                p_hat,
                ci_low,
                ci_high,
                scaled: theta.powf(1.0 / beta) * p_hat,
                p_hat_truncated: counts.truncated[j] as f64 / cfg.n_samples as f64,
            }
        })
        .collect();
    Ok(TailCurve {
        beta,
        model: *model,
        fading: fading.label(),
        entries,
        n_samples: cfg.n_samples,
        n_points: cfg.n_points,
        seed: cfg.seed,
    })
}

/// Estimates `πλ E[H^{1/β}] E⁰[(Σ H_i |X_i|^{-2β})^{-1/β}]` from Palm radii.
pub fn estimate_palm_constant<H: PropagationEffect>(
    model: &ProcessModel,
    fading: &H,
    beta: f64,
    cfg: &McConfig,
) -> Result<ConstantEstimate> {
    let mean_h = check_common(model, fading, beta, cfg.n_points)?;
    if cfg.n_samples < 2 {
        return Err(invalid("need at least two replicates"));
    }
    let source = RadiiSource::new(model, true, cfg.n_points)?;
    let rate = model.intensity();
    let marks = fading.sampler();
    let n = cfg.n_points;
    let inv_beta = 1.0 / beta;

    let (corrected, truncated) = run_sharded(
        cfg.n_samples,
        cfg.seed,
        Purpose::PalmConstant,
        cfg.threads,
        |_, count, rng| {
            let mut q = vec![0.0; n];
            let mut acc_c = MeanAcc::default();
            let mut acc_t = MeanAcc::default();
            for _ in 0..count {
                source.fill(&mut q, rng);
                let mut s = 0.0;
                let mut q_max = 0.0f64;
                for &qi in &q {
                    s += marks.sample(rng) * pow_neg(qi, beta);
                    q_max = q_max.max(qi);
                }
                let resid = residual_mean(rate, mean_h, q_max, beta);
                acc_c.push((s + resid).powf(-inv_beta));
                acc_t.push(s.powf(-inv_beta));
            }
            Ok((acc_c, acc_t))
        },
        |(mut a, mut b), (c, d)| {
            a.merge(&c);
            b.merge(&d);
            (a, b)
        },
    )?;

    let prefactor = std::f64::consts::PI * rate * fading.frac_moment(inv_beta);
    let value = prefactor * corrected.mean;
    Ok(ConstantEstimate {
        value,
        std_error: prefactor * corrected.std_error(),
        bracket_low: value,
        bracket_high: prefactor * truncated.mean,
        method: Method::PalmMc,
        meta: EstimateMeta {
            beta,
            model: Some(*model),
            fading: Some(fading.label()),
            n_points: Some(cfg.n_points),
            n_samples: Some(cfg.n_samples),
            seed: Some(cfg.seed),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub first: ConstantEstimate,
    pub second: ConstantEstimate,
    pub difference: f64,
    pub combined_std_error: f64,
    /// `|difference| ≤ 3·combined_std_error`
    pub consistent: bool,
}

/// Compares Palm-constant estimates for two Poisson intensities. The second
/// run uses an independent seed.
pub fn check_intensity_invariance<H: PropagationEffect>(
    intensities: (f64, f64),
    fading: &H,
    beta: f64,
    cfg: &McConfig,
) -> Result<InvarianceReport> {
    let first = estimate_palm_constant(&ProcessModel::poisson(intensities.0)?, fading, beta, cfg)?;
    let cfg2 = McConfig { seed: cfg.seed ^ 0x9e37_79b9_7f4a_7c15, ..*cfg };
    let second = estimate_palm_constant(&ProcessModel::poisson(intensities.1)?, fading, beta, &cfg2)?;
    let difference = first.value - second.value;
    let combined_std_error = first.std_error.hypot(second.std_error);
    Ok(InvarianceReport {
        consistent: difference.abs() <= 3.0 * combined_std_error,
        first,
        second,
        difference,
        combined_std_error,
    })
}
