//! The Voronoi cell of the origin, its circumscribed radius `R(o)`, and the
//! bounds on `P⁰(R(o) > r)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::ppsampler::{sample_lattice_palm, sample_poisson_planar_palm, GinibrePlanarSampler, ProcessModel, DEFAULT_EIGEN_CUTOFF};
use crate::quad::integrate;
use crate::rng::Purpose;
use crate::sirmc::{run_sharded, SHARD_SIZE};
use crate::stats::wilson_interval;

const SIDE_EPS: f64 = 1e-12;

/// Convex cell of the origin, counter-clockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellPolygon {
    pub vertices: Vec<[f64; 2]>,
    /// `false` if part of the initial box boundary survived clipping.
    pub bounded: bool,
    pub circumradius: f64,
}

impl CellPolygon {
    pub fn contains(&self, x: [f64; 2]) -> bool {
        let n = self.vertices.len();
        (0..n).all(|j| {
            let a = self.vertices[j];
            let b = self.vertices[(j + 1) % n];
            (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]) >= -SIDE_EPS
        })
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|j| {
                let a = self.vertices[j];
                let b = self.vertices[(j + 1) % n];
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy)]
struct Vertex {
    p: [f64; 2],
    /// whether the edge leaving this vertex lies on the initial box
    box_edge: bool,
}

fn norm2(p: [f64; 2]) -> f64 {
    p[0] * p[0] + p[1] * p[1]
}

/// Clips the polygon to `{x : p·x ≤ |p|²/2}`.
fn clip(poly: &[Vertex], p: [f64; 2]) -> Vec<Vertex> {
    let c = 0.5 * norm2(p);
    let scale = c.max(1.0);
    let side = |x: [f64; 2]| p[0] * x[0] + p[1] * x[1] - c;
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..n {
        let cur = poly[j];
        let next = poly[(j + 1) % n];
        let (sc, sn) = (side(cur.p), side(next.p));
        let cur_in = sc <= SIDE_EPS * scale;
        let next_in = sn <= SIDE_EPS * scale;
        if cur_in {
            out.push(cur);
        }
        if cur_in != next_in {
            let t = sc / (sc - sn);
            let x = [cur.p[0] + t * (next.p[0] - cur.p[0]), cur.p[1] + t * (next.p[1] - cur.p[1])];
            // leaving: the new edge runs along the bisector
            let box_edge = if cur_in { false } else { cur.box_edge };
            out.push(Vertex { p: x, box_edge });
        }
    }
    out
}

/// Cell of the origin among `points`, clipped to `[−h, h]²`.
///
/// Points are processed by increasing distance, and processing stops once
/// the next point is farther than twice the current circumradius: its
/// bisector cannot reach the cell.
pub fn cell_of_origin(points: &[[f64; 2]], box_halfwidth: f64) -> Result<CellPolygon> {
    if !(box_halfwidth > 0.0 && box_halfwidth.is_finite()) {
        return Err(invalid(format!("box half-width must be > 0 (got {box_halfwidth})")));
    }
    let h = box_halfwidth;
    let mut order: Vec<(f64, [f64; 2])> = Vec::with_capacity(points.len());
    for &p in points {
        let d = norm2(p);
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid(format!("point {p:?} coincides with the origin or is not finite")));
        }
        order.push((d, p));
    }
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1[0].total_cmp(&b.1[0])).then(a.1[1].total_cmp(&b.1[1])));

    let mut poly: Vec<Vertex> = [[-h, -h], [h, -h], [h, h], [-h, h]]
        .into_iter()
        .map(|p| Vertex { p, box_edge: true })
        .collect();
    let max_r2 = |poly: &[Vertex]| poly.iter().map(|v| norm2(v.p)).fold(0.0, f64::max);
    let mut r2 = max_r2(&poly);
    for &(d, p) in &order {
        if d > 4.0 * r2 {
            break;
        }
        poly = clip(&poly, p);
        r2 = max_r2(&poly);
    }
    Ok(CellPolygon {
        bounded: !poly.iter().any(|v| v.box_edge),
        circumradius: r2.sqrt(),
        vertices: poly.into_iter().map(|v| v.p).collect(),
    })
}

/// Fraction of a `resolution`-spaced grid on `[−h, h]²` where polygon
/// membership and brute-force nearest-point classification disagree.
pub fn grid_disagreement(points: &[[f64; 2]], cell: &CellPolygon, box_halfwidth: f64, resolution: f64) -> f64 {
    let n = (2.0 * box_halfwidth / resolution).round() as usize;
    let step = 2.0 * box_halfwidth / n as f64;
    let mut bad = 0usize;
    for iy in 0..n {
        let y = -box_halfwidth + (iy as f64 + 0.5) * step;
        for ix in 0..n {
            let x = -box_halfwidth + (ix as f64 + 0.5) * step;
            let d0 = x * x + y * y;
            let nearest_origin = points.iter().all(|p| (x - p[0]).powi(2) + (y - p[1]).powi(2) >= d0);
            if nearest_origin != cell.contains([x, y]) {
                bad += 1;
            }
        }
    }
    bad as f64 / (n * n) as f64
}

/// Sample of `R(o)` under the Palm distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircumradiusSample {
    pub model: ProcessModel,
    /// Accepted values in replicate order.
    pub radii: Vec<f64>,
    pub attempted: u64,
    /// Replicates whose cell was not certified inside the window.
    pub discarded: u64,
    pub window_radius: Option<f64>,
}

impl CircumradiusSample {
    pub fn discard_rate(&self) -> f64 {
        self.discarded as f64 / self.attempted.max(1) as f64
    }

    /// Empirical `P⁰(R(o) > r)` with a Wilson 95% interval.
    pub fn survival(&self, r: f64) -> (f64, f64, f64) {
        let n = self.radii.len() as u64;
        let k = self.radii.iter().filter(|&&x| x > r).count() as u64;
        let (lo, hi) = wilson_interval(k, n, crate::stats::Z95);
        (k as f64 / n.max(1) as f64, lo, hi)
    }
}

/// Default window: `6/√λ` for Poisson, 7 for Ginibre.
pub fn default_window(model: &ProcessModel) -> Option<f64> {
    match *model {
        ProcessModel::Poisson { intensity } => Some(6.0 / intensity.sqrt()),
        ProcessModel::Ginibre => Some(7.0),
        ProcessModel::LatticeMix { .. } => None,
    }
}

/// Draws `R(o)` for `n_samples` Palm replicates.
///
/// Poisson and Ginibre cells come from planar samples on a disk of radius
/// `window`; a replicate counts only if its cell is bounded with
/// `2 R(o) ≤ window`, which makes it exact. The lattice mixture uses
/// `R(o)² = (1 + T²)/4`.
pub fn circumscribed_radius_samples(
    model: &ProcessModel,
    n_samples: u64,
    window: Option<f64>,
    seed: u64,
    threads: usize,
) -> Result<CircumradiusSample> {
    model.validate()?;
    if n_samples == 0 {
        return Err(invalid("need at least one replicate"));
    }
    let window = match model {
        ProcessModel::LatticeMix { .. } => None,
        _ => Some(window.or_else(|| default_window(model)).unwrap()),
    };
    if let Some(w) = window {
        if !(w > 0.0 && w.is_finite()) {
            return Err(invalid(format!("window radius must be > 0 (got {w})")));
        }
    }
    let ginibre = match (model, window) {
        (ProcessModel::Ginibre, Some(w)) => Some(GinibrePlanarSampler::new(w, DEFAULT_EIGEN_CUTOFF)?),
        _ => None,
    };
    let (radii, discarded) = run_sharded(
        n_samples,
        seed,
        Purpose::Circumradius,
        threads,
        |_, count, rng| {
            let mut radii = Vec::with_capacity(count as usize);
            let mut discarded = 0u64;
            for _ in 0..count {
                let r = match *model {
                    ProcessModel::LatticeMix { shape } => Some(sample_lattice_palm(shape, rng)?.circumradius()),
                    ProcessModel::Poisson { intensity } => {
                        let w = window.unwrap();
                        certified(&sample_poisson_planar_palm(intensity, w, rng)?.points, w)?
                    }
                    ProcessModel::Ginibre => {
                        let w = window.unwrap();
                        certified(&ginibre.as_ref().unwrap().sample(rng)?.points, w)?
                    }
                };
                match r {
                    Some(r) => radii.push(r),
                    None => discarded += 1,
                }
            }
            Ok((radii, discarded))
        },
        |(mut a, da), (b, db)| {
            a.extend(b);
            (a, da + db)
        },
    )?;
    Ok(CircumradiusSample { model: *model, radii, attempted: n_samples, discarded, window_radius: window })
}

fn certified(points: &[[f64; 2]], window: f64) -> Result<Option<f64>> {
    let cell = cell_of_origin(points, window)?;
    Ok((cell.bounded && 2.0 * cell.circumradius <= window).then_some(cell.circumradius))
}

/// `2r²(π/7 + sin(π/7)cos(3π/7))`, the area of one of the seven petals.
pub fn petal_area(r: f64) -> f64 {
    2.0 * r * r * (PI / 7.0 + (PI / 7.0).sin() * (3.0 * PI / 7.0).cos())
}

pub fn ginibre_u(r: f64) -> f64 {
    let x = 4.0 * r * r * (2.0 * PI / 7.0).cos().powi(2);
    (x + (-x).exp() - 1.0) / 7.0
}

pub fn ginibre_v(r: f64) -> f64 {
    let x = 4.0 * r * r * (PI / 7.0).cos().powi(2);
    petal_area(r) / PI + (-x).exp_m1() / 7.0
}

/// `min(1, 7 e^{−max(u(r), v(r))})` for the Ginibre process.
pub fn ginibre_petal_bound(r: f64) -> f64 {
    (7.0 * (-ginibre_u(r).max(ginibre_v(r))).exp()).min(1.0)
}

/// Crossing point of `u` and `v` by bisection on `[0.1, 1]`.
pub fn ginibre_crossing(tol: f64) -> f64 {
    let (mut lo, mut hi) = (0.1, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if ginibre_u(mid) > ginibre_v(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Validity threshold of Calka's bound in units of `1/√λ`.
pub const CALKA_R0: f64 = 0.337;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub valid: bool,
}

/// `4πλr² e^{−πλr²}`, valid for `r√λ ≥ 0.337`.
pub fn calka_poisson_bound(intensity: f64, r: f64) -> BoundValue {
    let x = PI * intensity * r * r;
    BoundValue { value: 4.0 * x * (-x).exp(), valid: r * intensity.sqrt() >= CALKA_R0 }
}

/// `min(1, 7 exp(−max(0, λ·petal_area(r) − 1)))` for weakly sub-Poisson
/// processes.
pub fn generic_petal_bound(intensity: f64, r: f64) -> f64 {
    (7.0 * (-(intensity * petal_area(r) - 1.0).max(0.0)).exp()).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Calka,
    GinibrePetal,
    GenericPetal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub r: f64,
    pub bound: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub entries: Vec<BoundEntry>,
}

impl BoundCurve {
    pub fn new(kind: BoundKind, intensity: f64, grid: &[f64]) -> Self {
        let entries = grid
            .iter()
            .map(|&r| {
                let (bound, valid) = match kind {
                    BoundKind::Calka => {
                        let b = calka_poisson_bound(intensity, r);
                        (b.value, b.valid)
                    }
                    BoundKind::GinibrePetal => (ginibre_petal_bound(r), true),
                    BoundKind::GenericPetal => (generic_petal_bound(intensity, r), true),
                };
                BoundEntry { r, bound, valid }
            })
            .collect();
        BoundCurve { kind, entries }
    }
}

/// `K(z, w) = π⁻¹ exp(−(|z|² + |w|²)/2 + z w̄)`
pub fn ginibre_kernel(z: Complex64, w: Complex64) -> Complex64 {
    (-(z.norm_sqr() + w.norm_sqr()) / 2.0 + z * w.conj()).exp() / PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelL2Report {
    pub radius: f64,
    /// `(1/π)(1 − e^{−R²})`
    pub closed_form: f64,
    /// Polar quadrature of `|K(0, z)|²` over the disk.
    pub quadrature: f64,
    pub gap: f64,
}

/// `∫_{|z|≤R} |K(0, z)|² dz` in closed form and by 2D quadrature.
pub fn ginibre_kernel_l2(radius: f64) -> Result<KernelL2Report> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(invalid(format!("radius must be ≥ 0 (got {radius})")));
    }
    let closed_form = -(-radius * radius).exp_m1() / PI;
    let zero = Complex64::new(0.0, 0.0);
    let failure = std::cell::RefCell::new(None);
    let outer = integrate(
        |phi| {
            let inner = integrate(
                |r| r * ginibre_kernel(zero, Complex64::from_polar(r, phi)).norm_sqr(),
                0.0,
                radius,
                1e-15,
            );
            inner.unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                crate::quad::Integral { value: f64::NAN, error: 0.0, evaluations: 0 }
            })
            .value
        },
        0.0,
        TAU,
        1e-13,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let quadrature = outer?.value;
    Ok(KernelL2Report { radius, closed_form, quadrature, gap: (quadrature - closed_form).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentVerdict {
    Stabilizing,
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub mean_circumradius_sq: f64,
    /// Running means of `|X_k|²` for `k = 1, 2, 5`.
    pub mean_sq_distance: [f64; 3],
}

/// Finite-sample evidence on `E⁰ R(o)² < ∞` and `E⁰ |X_k|² < ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionAReport {
    pub model: ProcessModel,
    pub replicates: usize,
    pub checkpoints: Vec<Checkpoint>,
    pub discarded: u64,
    pub verdict: MomentVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<String>,
}

pub const NEIGHBOUR_RANKS: [usize; 3] = [1, 2, 5];

/// Classifies running means taken at decades of sample size.
pub fn moment_verdict(means: &[f64]) -> MomentVerdict {
    let ratios: Vec<f64> = means.windows(2).map(|w| w[1] / w[0]).collect();
    if ratios.is_empty() {
        MomentVerdict::Inconclusive
    } else if ratios.iter().all(|&q| q > 1.25) {
        MomentVerdict::Diverging
    } else if ratios.iter().all(|&q| (q - 1.0).abs() < 0.05) {
        MomentVerdict::Stabilizing
    } else {
        MomentVerdict::Inconclusive
    }
}

/// Squared distances to the `k`-th nearest points of `ℤ × Tℤ` (origin excluded).
fn lattice_sq_distances(t: f64) -> [f64; 3] {
    // with T ≥ 1 the five nearest points always lie in |m| ≤ 3, |n| ≤ 1
    let mut d: Vec<f64> = Vec::with_capacity(20);
    for m in -3i32..=3 {
        for n in -1i32..=1 {
            if m != 0 || n != 0 {
                d.push((m * m) as f64 + (n * n) as f64 * t * t);
            }
        }
    }
    d.sort_by(f64::total_cmp);
    NEIGHBOUR_RANKS.map(|k| d[k - 1])
}

/// Independent running-mean sequences used by default.
pub const DEFAULT_SEQUENCES: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionAConfig {
    /// Replicates per running-mean sequence; checkpoints at `10³, 10⁴, … ≤ n_max`.
    pub n_max: u64,
    /// Independent sequences; checkpoint values are medians across them.
    pub replicates: usize,
    pub window: Option<f64>,
    pub seed: u64,
    pub threads: usize,
}

impl ConditionAConfig {
    pub fn new(n_max: u64, seed: u64) -> Self {
        ConditionAConfig { n_max, replicates: DEFAULT_SEQUENCES, window: None, seed, threads: 1 }
    }
}

/// Running means of `R(o)²` and `|X_k|²` at decades of sample size.
///
/// A single running mean of a variable without a finite mean is dominated by
/// its largest draw, so with `replicates > 1` each checkpoint reports the
/// median over independent sequences.
pub fn condition_a_report(model: &ProcessModel, cfg: &ConditionAConfig) -> Result<ConditionAReport> {
    model.validate()?;
    if cfg.n_max < 1000 || cfg.replicates == 0 {
        return Err(invalid("condition (A) report needs n_max ≥ 1000 and at least one sequence"));
    }
    let n_max = cfg.n_max;
    let window = match model {
        ProcessModel::LatticeMix { .. } => None,
        _ => Some(cfg.window.or_else(|| default_window(model)).unwrap()),
    };
    let ginibre = match (model, window) {
        (ProcessModel::Ginibre, Some(w)) => Some(GinibrePlanarSampler::new(w, DEFAULT_EIGEN_CUTOFF)?),
        _ => None,
    };
    // per replicate: (sequence, [R(o)², |X_1|², |X_2|², |X_5|²]) or a discard
    let total = n_max * cfg.replicates as u64;
    let (rows, discarded) = run_sharded(
        total,
        cfg.seed,
        Purpose::ConditionA,
        cfg.threads,
        |shard, count, rng| {
            let mut rows: Vec<(usize, [f64; 4])> = Vec::with_capacity(count as usize);
            let mut discarded = 0u64;
            for j in 0..count {
                let seq = ((shard * SHARD_SIZE + j) / n_max) as usize;
                let points = match *model {
                    ProcessModel::LatticeMix { shape } => {
                        let draw = sample_lattice_palm(shape, rng)?;
                        let d = lattice_sq_distances(draw.t);
                        rows.push((seq, [draw.circumradius().powi(2), d[0], d[1], d[2]]));
                        continue;
                    }
                    ProcessModel::Poisson { intensity } => sample_poisson_planar_palm(intensity, window.unwrap(), rng)?.points,
                    ProcessModel::Ginibre => ginibre.as_ref().unwrap().sample(rng)?.points,
                };
                let mut d: Vec<f64> = points.iter().map(|&p| norm2(p)).collect();
                d.sort_by(f64::total_cmp);
                match certified(&points, window.unwrap())? {
                    Some(r) if d.len() >= 5 => rows.push((seq, [r * r, d[0], d[1], d[4]])),
                    _ => discarded += 1,
                }
            }
            Ok((rows, discarded))
        },
        |(mut a, da), (b, db)| {
            a.extend(b);
            (a, da + db)
        },
    )?;

    // running means per sequence at each decade
    let mut per_seq: Vec<Vec<[f64; 4]>> = vec![Vec::new(); cfg.replicates];
    let mut sums = vec![[0.0; 4]; cfg.replicates];
    let mut counts = vec![0u64; cfg.replicates];
    for (seq, row) in &rows {
        for (s, x) in sums[*seq].iter_mut().zip(row) {
            *s += x;
        }
        counts[*seq] += 1;
        let n = counts[*seq];
        if n >= 1000 && 10u64.pow(n.ilog10()) == n {
            per_seq[*seq].push(sums[*seq].map(|v| v / n as f64));
        }
    }
    let levels = per_seq.iter().map(Vec::len).min().unwrap_or(0);
    let median = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        let m = v.len();
        if m % 2 == 1 {
            v[m / 2]
        } else {
            0.5 * (v[m / 2 - 1] + v[m / 2])
        }
    };
    let checkpoints: Vec<Checkpoint> = (0..levels)
        .map(|l| {
            let q = |c: usize| median(per_seq.iter().map(|s| s[l][c]).collect());
            Checkpoint {
                n: 1000 * 10u64.pow(l as u32),
                mean_circumradius_sq: q(0),
                mean_sq_distance: [q(1), q(2), q(3)],
            }
        })
        .collect();
    let means: Vec<f64> = checkpoints.iter().map(|c| c.mean_circumradius_sq).collect();
    let analytic = match model {
        ProcessModel::LatticeMix { shape } => Some(format!(
            "E⁰[R(o)²] = ∞: under Palm T is Pareto({shape}) and E⁰T² = ∞"
        )),
        _ => None,
    };
    Ok(ConditionAReport {
        model: *model,
        replicates: cfg.replicates,
        checkpoints,
        discarded,
        verdict: moment_verdict(&means),
        analytic,
    })
}

/// Palm inversion check for the lattice mixture with `f(T) = 1/(1+T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PalmIdentityReport {
    pub shape: f64,
    /// `a ∫₀¹ sᵃ/(1+s) ds`
    pub quadrature: f64,
    /// Mean of `1/(1+T)` under Palm.
    pub palm_mean: f64,
    pub palm_std_error: f64,
    /// `(1/λ)·E[1/((1+T)T)]` under the stationary law.
    pub inverted_mean: f64,
    pub inverted_std_error: f64,
}

impl PalmIdentityReport {
    pub fn within(&self, sigmas: f64) -> bool {
        (self.palm_mean - self.quadrature).abs() <= sigmas * self.palm_std_error
            && (self.inverted_mean - self.quadrature).abs() <= sigmas * self.inverted_std_error
    }
}

pub fn lattice_palm_identity(shape: f64, n_samples: u64, seed: u64, threads: usize) -> Result<PalmIdentityReport> {
    let model = ProcessModel::lattice(shape)?;
    if n_samples < 2 {
        return Err(invalid("need at least two replicates"));
    }
    let lambda = model.intensity();
    let quadrature = shape * integrate(|s| s.powf(shape) / (1.0 + s), 0.0, 1.0, 1e-14)?.value;
    let (palm, inv) = run_sharded(
        n_samples,
        seed,
        Purpose::Lattice,
        threads,
        |_, count, rng| {
            let mut palm = crate::stats::MeanAcc::default();
            let mut inv = crate::stats::MeanAcc::default();
            for _ in 0..count {
                let t = sample_lattice_palm(shape, rng)?.t;
                palm.push(1.0 / (1.0 + t));
                let s = crate::ppsampler::sample_lattice_stationary(shape, rng)?;
                inv.push(1.0 / ((1.0 + s) * s) / lambda);
            }
            Ok((palm, inv))
        },
        |(mut a, mut b), (c, d)| {
            a.merge(&c);
            b.merge(&d);
            (a, b)
        },
    )?;
    Ok(PalmIdentityReport {
        shape,
        quadrature,
        palm_mean: palm.mean,
        palm_std_error: palm.std_error(),
        inverted_mean: inv.mean,
        inverted_std_error: inv.std_error(),
    })
}

/// Uniform points in `[−spread, spread]²` for the geometry oracle.
pub fn random_configuration<R: Rng + ?Sized>(n: usize, spread: f64, rng: &mut R) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| [spread * (2.0 * rng.gen::<f64>() - 1.0), spread * (2.0 * rng.gen::<f64>() - 1.0)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use proptest::prelude::*;

    #[test]
    fn square_from_four_neighbours() {
        let pts = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
        let c = cell_of_origin(&pts, 10.0).unwrap();
        assert!(c.bounded);
        assert_eq!(c.vertices.len(), 4);
        assert!((c.circumradius - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((c.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_point_leaves_cell_unbounded() {
        let c = cell_of_origin(&[[2.0, 0.0]], 10.0).unwrap();
        assert!(!c.bounded);
        assert!(c.vertices.iter().all(|v| v[0] <= 1.0 + 1e-12));
        assert!((c.area() - 20.0 * 11.0).abs() < 1e-9);
        let empty = cell_of_origin(&[], 1.0).unwrap();
        assert!(!empty.bounded && (empty.area() - 4.0).abs() < 1e-12);
        assert!(cell_of_origin(&[[0.0, 0.0]], 1.0).is_err());
    }

    #[test]
    fn matches_grid_oracle() {
        let mut rng = stream_rng(3, 0);
        for _ in 0..20 {
            let pts = random_configuration(5, 1.0, &mut rng);
            let cell = cell_of_origin(&pts, 0.5).unwrap();
            assert!(grid_disagreement(&pts, &cell, 0.5, 4e-3) < 1e-3);
        }
    }

    #[test]
    fn petal_and_ginibre_bound_values() {
        assert!((petal_area(1.0) - 1.090_694_330_739_449).abs() < 1e-14);
        assert_eq!(petal_area(0.0), 0.0);
        assert!((petal_area(2.0) - 4.0 * petal_area(1.0)).abs() < 1e-14);
        assert!((ginibre_u(1.0) - 0.109_450_908_138_866_4).abs() < 1e-14);
        assert!((ginibre_v(1.0) - 0.209_877_573_757_217_8).abs() < 1e-14);
        assert!((ginibre_petal_bound(3.0) - 0.354_927_476_261_484_3).abs() < 1e-14);
        assert_eq!(ginibre_petal_bound(1.0), 1.0);
        assert!((ginibre_petal_bound(3.0) - 7.0 * (-ginibre_v(3.0)).exp()).abs() < 1e-15);
        let rs = ginibre_crossing(1e-6);
        assert!((rs - 0.5276).abs() < 1e-3, "{rs}");
        for j in 1..200 {
            let r = rs + (j as f64 - 100.0) * 1e-3;
            if r < rs - 1e-6 {
                assert!(ginibre_u(r) > ginibre_v(r));
            } else if r > rs + 1e-6 {
                assert!(ginibre_u(r) < ginibre_v(r));
            }
        }
        let mut prev = 1.0;
        for j in 0..100 {
            let b = ginibre_petal_bound(1.0 + 0.1 * j as f64);
            assert!(b <= prev);
            prev = b;
        }
    }

    #[test]
    fn calka_and_generic_values() {
        let b = calka_poisson_bound(1.0, 1.0);
        assert!((b.value - 4.0 * PI * (-PI).exp()).abs() < 1e-15 && b.valid);
        assert!((b.value - 0.543_042_112_601_186_8).abs() < 1e-14);
        assert!(!calka_poisson_bound(1.0, 0.3).valid);
        assert!((calka_poisson_bound(1.0, 2.0).value - 1.752_929_460_290_992e-4).abs() < 1e-17);
        assert_eq!(generic_petal_bound(1.0, 0.5), 1.0);
        let g = generic_petal_bound(1.0 / PI, 4.0);
        assert!((g - 0.073_611_761_471_803_08).abs() < 1e-14, "{g}");
        for j in 1..60 {
            let r = 0.1 * j as f64;
            assert!(ginibre_petal_bound(r) <= generic_petal_bound(1.0 / PI, r) + 1e-15);
        }
    }

    #[test]
    fn kernel_identity() {
        let rep = ginibre_kernel_l2(6.0).unwrap();
        assert!((rep.closed_form - 1.0 / PI).abs() < 1e-10);
        assert!(rep.gap < 1e-10, "{rep:?}");
        assert_eq!(ginibre_kernel_l2(0.0).unwrap().closed_form, 0.0);
        assert!((ginibre_kernel_l2(1.0).unwrap().closed_form - 0.201_22).abs() < 1e-5);
        // Hermitian kernel with K(z, z) = 1/π
        let z = Complex64::new(0.3, -1.2);
        let w = Complex64::new(-0.7, 0.4);
        assert!((ginibre_kernel(z, w) - ginibre_kernel(w, z).conj()).norm() < 1e-15);
        assert!((ginibre_kernel(z, z).re - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn lattice_circumradius_and_verdicts() {
        let s = circumscribed_radius_samples(&ProcessModel::lattice(1.5).unwrap(), 2000, None, 1, 1).unwrap();
        assert_eq!(s.radii.len(), 2000);
        assert!(s.radii.iter().all(|&r| r >= 0.5f64.sqrt() - 1e-15));
        assert_eq!(lattice_sq_distances(1.0), [1.0, 1.0, 2.0]);
        assert_eq!(lattice_sq_distances(3.0), [1.0, 1.0, 9.0]);
        assert_eq!(moment_verdict(&[1.0, 1.01, 0.99]), MomentVerdict::Stabilizing);
        assert_eq!(moment_verdict(&[1.0, 2.0, 4.0]), MomentVerdict::Diverging);
        assert_eq!(moment_verdict(&[1.0, 2.0, 2.0]), MomentVerdict::Inconclusive);
    }

    #[test]
    fn poisson_cells_respect_calka() {
        let s = circumscribed_radius_samples(&ProcessModel::poisson(1.0).unwrap(), 4000, None, 2, 1).unwrap();
        assert_eq!(s.discarded, 0);
        for r in [0.6, 0.8, 1.0, 1.3] {
            let (p, _, _) = s.survival(r);
            let b = calka_poisson_bound(1.0, r).value.min(1.0);
            assert!(p <= b + 3.0 * (b * (1.0 - b) / 4000.0).sqrt(), "r = {r}: {p} > {b}");
        }
        // E⁰ R(o)² is finite; E⁰|X_1|² = 1/π
        let rep = condition_a_report(&ProcessModel::poisson(1.0).unwrap(), &ConditionAConfig::new(1000, 3)).unwrap();
        let m1 = rep.checkpoints[0].mean_sq_distance[0];
        assert!((m1 - 1.0 / PI).abs() < 3.0 / PI / 1000f64.sqrt(), "{m1}");
    }

    #[test]
    fn palm_identity_quadrature() {
        // a ∫₀¹ s^a/(1+s) ds at a = 1.5 equals a(2/3 − 2 + π/2) = 1.5(π/2 − 4/3)
        let r = lattice_palm_identity(1.5, 20_000, 5, 1).unwrap();
        assert!((r.quadrature - 1.5 * (PI / 2.0 - 4.0 / 3.0)).abs() < 1e-12);
        assert!(r.within(4.0), "{r:?}");
    }

    proptest! {
        #[test]
        fn permutation_invariant(pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3..12), seed in 0u64..1000) {
            let pts: Vec<[f64; 2]> = pts.into_iter().filter(|p| p.0.hypot(p.1) > 1e-3).map(|p| [p.0, p.1]).collect();
            let a = cell_of_origin(&pts, 5.0).unwrap();
            let mut shuffled = pts.clone();
            use rand::seq::SliceRandom;
            shuffled.shuffle(&mut stream_rng(seed, 0));
            let b = cell_of_origin(&shuffled, 5.0).unwrap();
            prop_assert_eq!(a.vertices.len(), b.vertices.len());
            for v in &a.vertices {
                prop_assert!(b.vertices.iter().any(|w| (v[0] - w[0]).abs() < 1e-9 && (v[1] - w[1]).abs() < 1e-9));
            }
            prop_assert_eq!(a.bounded, b.bounded);
        }

        #[test]
        fn adding_points_never_grows_circumradius(pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..15)) {
            let pts: Vec<[f64; 2]> = pts.into_iter().filter(|p| p.0.hypot(p.1) > 1e-3).map(|p| [p.0, p.1]).collect();
            let mut prev = f64::INFINITY;
            for k in 0..=pts.len() {
                let c = cell_of_origin(&pts[..k], 5.0).unwrap();
                prop_assert!(c.circumradius <= prev + 1e-12);
                prop_assert!(c.vertices.iter().all(|&v| c.contains(v)));
                prev = c.circumradius;
            }
        }
    }
}
