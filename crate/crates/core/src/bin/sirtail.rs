use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sirtail::experiment::{run, Command, ConfigLayer, ExperimentConfig, MethodChoice};
use sirtail::report::write_all;
use sirtail::Error;

#[derive(Parser)]
#[command(name = "sirtail", version, about = "SIR tail asymptotics: Monte Carlo, quadrature and Voronoi bounds")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate P(SIR > θ) on a log-spaced θ grid
    Tail {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta_min: Option<f64>,
        #[arg(long)]
        theta_max: Option<f64>,
        #[arg(long)]
        theta_points: Option<usize>,
    },
    /// Asymptotic constant by quadrature and/or Palm Monte Carlo
    Constant {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_method)]
        method: Option<MethodChoice>,
        #[arg(long)]
        abs_tol: Option<f64>,
        #[arg(long)]
        rel_tol: Option<f64>,
        #[arg(long)]
        product_tail_tol: Option<f64>,
        #[arg(long)]
        panel_order: Option<usize>,
    },
    /// Empirical circumradius survival against the closed-form bounds
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        r_points: Option<usize>,
        /// Sampling disk radius
        #[arg(long)]
        window: Option<f64>,
    },
    /// Running means of R(o)² for the mixed lattice
    Counterexample {
        #[command(flatten)]
        common: Common,
        /// Lattice shape a ∈ (1, 2)
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long)]
        sequences: Option<usize>,
        #[arg(long)]
        identity_samples: Option<u64>,
    },
    /// Run the full acceptance suite
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// poisson:<λ> | ginibre | lattice:<a>
    #[arg(long)]
    model: Option<String>,
    /// rayleigh | deterministic | nakagami:<m> | gamma:<shape>:<scale>
    #[arg(long)]
    fading: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    /// Points kept per replicate
    #[arg(long)]
    points: Option<usize>,
    /// Worker threads (default from SIRTAIL_THREADS, else 1)
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with the same keys; flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<MethodChoice, String> {
    match s {
        "quadrature" => Ok(MethodChoice::Quadrature),
        "palm-mc" => Ok(MethodChoice::PalmMc),
        "both" => Ok(MethodChoice::Both),
        _ => Err(format!("expected quadrature | palm-mc | both, got '{s}'")),
    }
}

impl Common {
    fn layer(&self, command: Command) -> ConfigLayer {
        ConfigLayer {
            command: Some(command),
            model: self.model.clone(),
            fading: self.fading.clone(),
            beta: self.beta,
            seed: self.seed,
            samples: self.samples,
            points: self.points,
            threads: self.threads,
            out: self.out.clone(),
            ..Default::default()
        }
    }
}

fn layers(cmd: Cmd) -> (Option<PathBuf>, ConfigLayer) {
    match cmd {
        Cmd::Tail { common, theta_min, theta_max, theta_points } => (
            common.config.clone(),
            ConfigLayer { theta_min, theta_max, theta_points, ..common.layer(Command::Tail) },
        ),
        Cmd::Constant { common, method, abs_tol, rel_tol, product_tail_tol, panel_order } => (
            common.config.clone(),
            ConfigLayer { method, abs_tol, rel_tol, product_tail_tol, panel_order, ..common.layer(Command::Constant) },
        ),
        Cmd::Bounds { common, r_max, r_points, window } => {
            (common.config.clone(), ConfigLayer { r_max, r_points, window, ..common.layer(Command::Bounds) })
        }
        Cmd::Counterexample { common, a, n_max, sequences, identity_samples } => (
            common.config.clone(),
            ConfigLayer { a, n_max, sequences, identity_samples, ..common.layer(Command::Counterexample) },
        ),
        Cmd::Validate { common } => (common.config.clone(), common.layer(Command::Validate)),
    }
}

fn resolve(cmd: Cmd) -> Result<ExperimentConfig, Error> {
    let (file, flags) = layers(cmd);
    let mut base = match file {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            ConfigLayer::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => ConfigLayer::default(),
    };
    if let Ok(v) = std::env::var("SIRTAIL_THREADS") {
        let threads = v.parse().map_err(|_| Error::Config(format!("SIRTAIL_THREADS: not a count: '{v}'")))?;
        base = base.overlay(ConfigLayer { threads: Some(threads), ..Default::default() });
    }
    ExperimentConfig::resolve(base.overlay(flags))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = resolve(cli.command).and_then(|cfg| {
        let out = run(&cfg)?;
        let paths = write_all(&cfg.out, &out.artifacts)?;
        print!("{}", out.summary);
        for p in paths {
            println!("wrote {}", p.display());
        }
        Ok(out.failed)
    });
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("validation failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
