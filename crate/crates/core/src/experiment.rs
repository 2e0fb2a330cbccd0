//! Experiment configuration and the command runner behind the `sirtail`
//! binary.
//!
//! A configuration is assembled from layers (TOML file, then flags), resolved
//! against per-command defaults, and run into in-memory [`Artifact`]s. The
//! artifacts never contain the thread count or output directory, so equal
//! seeds give byte-identical files.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::asymquad::{ginibre_constant, poisson_constant, QuadConfig};
use crate::error::{Error, Result};
use crate::estimate::ConstantEstimate;
use crate::fading::FadingSpec;
use crate::ppsampler::ProcessModel;
use crate::report::{fmt_float, to_csv, to_json, Artifact};
use crate::sirmc::{estimate_palm_constant, estimate_sir_tail, log_grid, McConfig, TailCurve, DEFAULT_POINTS};
use crate::validate::{CriterionResult, Suite};
use crate::voronoi::{
    calka_poisson_bound, circumscribed_radius_samples, condition_a_report, generic_petal_bound, ginibre_crossing,
    ginibre_petal_bound, lattice_palm_identity, ConditionAConfig, ConditionAReport, PalmIdentityReport,
    DEFAULT_SEQUENCES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Tail,
    Constant,
    Bounds,
    Counterexample,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    Quadrature,
    PalmMc,
    #[default]
    Both,
}

/// One layer of settings; unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub command: Option<Command>,
    /// `poisson:<λ>`, `ginibre` or `lattice:<a>`
    pub model: Option<String>,
    /// `rayleigh`, `deterministic`, `nakagami:<m>` or `gamma:<shape>:<scale>`
    pub fading: Option<String>,
    pub beta: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub points: Option<usize>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub method: Option<MethodChoice>,
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub theta_points: Option<usize>,
    pub r_max: Option<f64>,
    pub r_points: Option<usize>,
    pub window: Option<f64>,
    /// Lattice shape for `counterexample`.
    pub a: Option<f64>,
    pub n_max: Option<u64>,
    pub sequences: Option<usize>,
    pub identity_samples: Option<u64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub product_tail_tol: Option<f64>,
    pub panel_order: Option<usize>,
}

macro_rules! overlay_fields {
    ($top:ident, $base:ident; $($f:ident),*) => {
        ConfigLayer { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ConfigLayer {
    /// Parses a TOML layer; errors carry the line, column and field.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// `top` wins wherever it sets a field.
    pub fn overlay(self, top: ConfigLayer) -> ConfigLayer {
        let base = self;
        overlay_fields!(top, base; command, model, fading, beta, seed, samples, points, threads, out, method,
            theta_min, theta_max, theta_points, r_max, r_points, window, a, n_max, sequences, identity_samples,
            abs_tol, rel_tol, product_tail_tol, panel_order)
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub model: ProcessModel,
    pub fading: FadingSpec,
    pub beta: f64,
    pub seed: u64,
    pub samples: u64,
    pub points: usize,
    #[serde(skip)]
    pub threads: usize,
    #[serde(skip)]
    pub out: PathBuf,
    pub method: MethodChoice,
    pub theta_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    pub n_max: u64,
    pub sequences: usize,
    pub identity_samples: u64,
    pub quad: QuadConfig,
}

fn field<T: std::str::FromStr<Err = Error>>(name: &str, v: &str) -> Result<T> {
    v.parse().map_err(|e: Error| match e {
        Error::Config(msg) => Error::Config(format!("field `{name}`: {msg}")),
        other => Error::Config(format!("field `{name}`: {other}")),
    })
}

impl ExperimentConfig {
    /// Applies per-command defaults and checks every setting.
    pub fn resolve(layer: ConfigLayer) -> Result<Self> {
        let command = layer.command.ok_or_else(|| Error::Config("no command given".into()))?;
        let seed = layer.seed.ok_or_else(|| {
            Error::Config("field `seed` is required (pass --seed or set it in the config file)".into())
        })?;
        let model = match (command, layer.model.as_deref(), layer.a) {
            (Command::Counterexample, None, a) => ProcessModel::lattice(a.unwrap_or(1.5))?,
            (Command::Counterexample, Some(m), Some(a)) if m.starts_with("lattice") => {
                let _ = field::<ProcessModel>("model", m)?;
                ProcessModel::lattice(a)?
            }
            (_, Some(m), _) => field("model", m)?,
            (_, None, _) => ProcessModel::poisson(1.0)?,
        };
        let fading: FadingSpec = field("fading", layer.fading.as_deref().unwrap_or("rayleigh"))?;
        let beta = layer.beta.unwrap_or(2.0);
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(Error::Config(format!("field `beta`: must be finite and > 1 (got {beta})")));
        }
        let samples = layer.samples.unwrap_or(match (command, model) {
            (Command::Tail, _) => 1_000_000,
            (Command::Bounds, ProcessModel::Ginibre) => 10_000,
            _ => 100_000,
        });
        let threads = layer.threads.unwrap_or(1).max(1);
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Config(format!("field `{name}`: must be finite and > 0 (got {v})")))
            }
        };
        let theta_min = positive("theta_min", layer.theta_min.unwrap_or(10.0))?;
        let theta_max = positive("theta_max", layer.theta_max.unwrap_or(1e5))?;
        let theta_points = layer.theta_points.unwrap_or(20);
        if theta_points == 0 || (theta_points > 1 && theta_max <= theta_min) {
            return Err(Error::Config("θ grid needs theta_points ≥ 1 and theta_max > theta_min".into()));
        }
        let r_max = positive("r_max", layer.r_max.unwrap_or(3.0 / model.intensity().sqrt().max(1e-300)))?;
        let r_points = layer.r_points.unwrap_or(30).max(1);
        let mut quad = QuadConfig::default();
        quad.abs_tol = layer.abs_tol.unwrap_or(quad.abs_tol);
        quad.rel_tol = layer.rel_tol.unwrap_or(quad.rel_tol);
        quad.product_tail_tol = layer.product_tail_tol.unwrap_or(quad.product_tail_tol);
        quad.panel_order = layer.panel_order.unwrap_or(quad.panel_order);
        quad.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(ExperimentConfig {
            command,
            model,
            fading,
            beta,
            seed,
            samples,
            points: layer.points.unwrap_or(DEFAULT_POINTS),
            threads,
            out: layer.out.unwrap_or_else(|| PathBuf::from("out")),
            method: layer.method.unwrap_or_default(),
            theta_grid: log_grid(theta_min, theta_max, theta_points),
            r_grid: (1..=r_points).map(|j| r_max * j as f64 / r_points as f64).collect(),
            window: layer.window,
            n_max: layer.n_max.unwrap_or(100_000),
            sequences: layer.sequences.unwrap_or(DEFAULT_SEQUENCES),
            identity_samples: layer.identity_samples.unwrap_or(1_000_000),
            quad,
        })
    }

    fn mc(&self) -> McConfig {
        McConfig::new(self.samples, self.points, self.seed).with_threads(self.threads)
    }
}

/// Artifacts plus a human-readable summary.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub summary: String,
    /// Set when a validation check failed.
    pub failed: bool,
}

/// Runs the configured command.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    match cfg.command {
        Command::Tail => run_tail(cfg),
        Command::Constant => run_constant(cfg),
        Command::Bounds => run_bounds(cfg),
        Command::Counterexample => run_counterexample(cfg),
        Command::Validate => run_validate(cfg),
    }
}

#[derive(Serialize)]
struct TailDoc<'a> {
    config: &'a ExperimentConfig,
    curve: &'a TailCurve,
}

fn run_tail(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let curve = estimate_sir_tail(&cfg.model, &cfg.fading, cfg.beta, &cfg.theta_grid, &cfg.mc())?;
    let rows = curve.entries.iter().map(|e| {
        [e.theta, e.p_hat, e.ci_low, e.ci_high, e.scaled].iter().map(|&x| fmt_float(x)).collect()
    });
    let csv = to_csv(&["theta", "p_hat", "ci_low", "ci_high", "scaled"], rows)?;
    let mut summary = format!("{:>14} {:>14} {:>14}\n", "theta", "p_hat", "scaled");
    for e in &curve.entries {
        let _ = writeln!(summary, "{:>14} {:>14} {:>14}", fmt_float(e.theta), fmt_float(e.p_hat), fmt_float(e.scaled));
    }
    Ok(RunOutput {
        artifacts: vec![
            Artifact { name: "tail.csv".into(), contents: csv },
            Artifact { name: "tail.json".into(), contents: to_json(&TailDoc { config: cfg, curve: &curve })? },
        ],
        summary,
        failed: false,
    })
}

#[derive(Serialize)]
struct ConstantDoc<'a> {
    config: &'a ExperimentConfig,
    estimates: &'a [ConstantEstimate],
    /// `|a − b|` over the combined standard error when both methods ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    gap_z: Option<f64>,
}

fn run_constant(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut estimates = Vec::new();
    if cfg.method != MethodChoice::PalmMc {
        estimates.push(match cfg.model {
            ProcessModel::Poisson { .. } => poisson_constant(cfg.beta)?,
            ProcessModel::Ginibre => ginibre_constant(&cfg.fading, cfg.beta, &cfg.quad)?,
            m @ ProcessModel::LatticeMix { .. } => return Err(Error::UnsupportedModel(m.to_string())),
        });
    }
    if cfg.method != MethodChoice::Quadrature {
        estimates.push(estimate_palm_constant(&cfg.model, &cfg.fading, cfg.beta, &cfg.mc())?);
    }
    let gap_z = (estimates.len() == 2).then(|| estimates[0].z_gap(&estimates[1]));
    let mut summary = format!("{:>12} {:>14} {:>14} {:>14} {:>14}\n", "method", "value", "std_error", "low", "high");
    for e in &estimates {
        let name = serde_json::to_value(e.method)?.as_str().unwrap_or_default().to_string();
        let _ = writeln!(
            summary,
            "{name:>12} {:>14} {:>14} {:>14} {:>14}",
            fmt_float(e.value),
            fmt_float(e.std_error),
            fmt_float(e.bracket_low),
            fmt_float(e.bracket_high)
        );
    }
    if let Some(z) = gap_z {
        let _ = writeln!(summary, "gap: {} standard errors", fmt_float(z));
    }
    let doc = ConstantDoc { config: cfg, estimates: &estimates, gap_z };
    Ok(RunOutput {
        artifacts: vec![Artifact { name: "constant.json".into(), contents: to_json(&doc)? }],
        summary,
        failed: false,
    })
}

#[derive(Serialize)]
struct BoundsDoc<'a> {
    config: &'a ExperimentConfig,
    attempted: u64,
    accepted: usize,
    discarded: u64,
    discard_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    window_radius: Option<f64>,
    /// Bounds that apply to this model.
    applicable: Vec<&'static str>,
    /// Grid radii where the empirical survival exceeds an applicable bound
    /// by more than three binomial standard deviations.
    exceedances: Vec<f64>,
    /// Crossing of the two Ginibre petal exponents.
    r_star: f64,
}

/// `p̂ > b + 3√(b(1−b)/n)`
pub fn exceeds_bound(p_hat: f64, bound: f64, n: usize) -> bool {
    let b = bound.clamp(0.0, 1.0);
    p_hat > b + 3.0 * (b * (1.0 - b) / n.max(1) as f64).sqrt()
}

fn run_bounds(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let sample = circumscribed_radius_samples(&cfg.model, cfg.samples, cfg.window, cfg.seed, cfg.threads)?;
    let lambda = cfg.model.intensity();
    let n = sample.radii.len();
    let applicable: Vec<&'static str> = match cfg.model {
        ProcessModel::Poisson { .. } => vec!["calka", "generic_petal"],
        ProcessModel::Ginibre => vec!["ginibre_petal", "generic_petal"],
        ProcessModel::LatticeMix { .. } => vec![],
    };
    let mut rows = Vec::with_capacity(cfg.r_grid.len());
    let mut exceedances = Vec::new();
    for &r in &cfg.r_grid {
        let (p, _, hi) = sample.survival(r);
        let calka = calka_poisson_bound(lambda, r);
        let petal = ginibre_petal_bound(r);
        let generic = generic_petal_bound(lambda, r);
        let exceeded = applicable.iter().any(|&k| match k {
            "calka" => calka.valid && exceeds_bound(p, calka.value, n),
            "ginibre_petal" => exceeds_bound(p, petal, n),
            _ => exceeds_bound(p, generic, n),
        });
        if exceeded {
            exceedances.push(r);
        }
        rows.push(vec![
            fmt_float(r),
            fmt_float(p),
            fmt_float(hi),
            fmt_float(calka.value),
            fmt_float(petal),
            fmt_float(generic),
            calka.valid.to_string(),
        ]);
    }
    let csv = to_csv(&["r", "empirical", "ci_high", "calka", "ginibre_petal", "generic_petal", "calka_valid"], rows)?;
    let doc = BoundsDoc {
        config: cfg,
        attempted: sample.attempted,
        accepted: n,
        discarded: sample.discarded,
        discard_rate: sample.discard_rate(),
        window_radius: sample.window_radius,
        applicable,
        exceedances,
        r_star: ginibre_crossing(1e-12),
    };
    let summary = format!(
        "{} cells accepted of {} ({} discarded); {} grid radii exceed an applicable bound at 3σ; r* = {}\n",
        doc.accepted,
        doc.attempted,
        doc.discarded,
        doc.exceedances.len(),
        fmt_float(doc.r_star)
    );
    Ok(RunOutput {
        artifacts: vec![
            Artifact { name: "bounds.csv".into(), contents: csv },
            Artifact { name: "bounds.json".into(), contents: to_json(&doc)? },
        ],
        summary,
        failed: false,
    })
}

#[derive(Serialize)]
struct CounterexampleDoc<'a> {
    config: &'a ExperimentConfig,
    report: &'a ConditionAReport,
    /// Ratios of consecutive checkpoint means of `R(o)²`.
    growth: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    palm_identity: Option<PalmIdentityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    palm_identity_within_3_sigma: Option<bool>,
}

fn run_counterexample(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let a_cfg = ConditionAConfig {
        n_max: cfg.n_max,
        replicates: cfg.sequences,
        window: cfg.window,
        seed: cfg.seed,
        threads: cfg.threads,
    };
    let report = condition_a_report(&cfg.model, &a_cfg)?;
    let identity = match cfg.model {
        ProcessModel::LatticeMix { shape } => Some(lattice_palm_identity(shape, cfg.identity_samples, cfg.seed, cfg.threads)?),
        _ => None,
    };
    let growth: Vec<f64> = report.checkpoints.windows(2).map(|w| w[1].mean_circumradius_sq / w[0].mean_circumradius_sq).collect();
    let rows = report.checkpoints.iter().map(|c| {
        let mut row = vec![c.n.to_string(), fmt_float(c.mean_circumradius_sq)];
        row.extend(c.mean_sq_distance.iter().map(|&x| fmt_float(x)));
        row
    });
    let csv = to_csv(&["n", "mean_r2", "mean_d1", "mean_d2", "mean_d5"], rows)?;
    let mut summary = format!("{:>10} {:>14}\n", "n", "mean R(o)^2");
    for c in &report.checkpoints {
        let _ = writeln!(summary, "{:>10} {:>14}", c.n, fmt_float(c.mean_circumradius_sq));
    }
    let _ = writeln!(summary, "verdict: {:?}", report.verdict);
    if let Some(text) = &report.analytic {
        let _ = writeln!(summary, "analytic: {text}");
    }
    if let Some(id) = &identity {
        let _ = writeln!(
            summary,
            "palm identity: quadrature {} palm {} ± {} inverted {} ± {}",
            fmt_float(id.quadrature),
            fmt_float(id.palm_mean),
            fmt_float(id.palm_std_error),
            fmt_float(id.inverted_mean),
            fmt_float(id.inverted_std_error)
        );
    }
    let doc = CounterexampleDoc {
        config: cfg,
        report: &report,
        growth,
        palm_identity_within_3_sigma: identity.as_ref().map(|r| r.within(3.0)),
        palm_identity: identity,
    };
    Ok(RunOutput {
        artifacts: vec![
            Artifact { name: "counterexample.csv".into(), contents: csv },
            Artifact { name: "counterexample.json".into(), contents: to_json(&doc)? },
        ],
        summary,
        failed: false,
    })
}

#[derive(Serialize)]
struct ValidateDoc<'a> {
    seed: u64,
    passed: bool,
    criteria: &'a [CriterionResult],
}

fn run_validate(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let suite = Suite::new(cfg.seed, cfg.threads);
    let mut results = Vec::new();
    let mut summary = String::new();
    for id in Suite::IDS {
        let r = suite.criterion(id);
        let _ = writeln!(summary, "{r}");
        results.push(r);
    }
    let passed = results.iter().all(|r| r.passed);
    let doc = ValidateDoc { seed: cfg.seed, passed, criteria: &results };
    Ok(RunOutput {
        artifacts: vec![Artifact { name: "validate.json".into(), contents: to_json(&doc)? }],
        summary,
        failed: !passed,
    })
}

impl Error {
    /// Process exit status for this error: 2 for configuration problems,
    /// 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::QuadratureFailure(_) | Error::SamplerStall { .. } => 4,
            _ => 2,
        }
    }
}
