//! fraccert: numerical toolkit and certificate engine for uniqueness
//! classes of fractional parabolic and elliptic equations with variable
//! density.
//!
//! Exit codes: 0 all requested checks passed; 1 a check failed;
//! 2 configuration error; 3 numerical failure.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RawConfig, ResolvedConfig};

#[derive(Debug)]
pub enum RunError {
    Config { what: String },
    Numerical { what: String },
    Io { what: String },
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config { what } => write!(f, "configuration error: {what}"),
            RunError::Numerical { what } => write!(f, "numerical failure: {what}"),
            RunError::Io { what } => write!(f, "io error: {what}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "fraccert",
    about = "Evaluators, kernels, covering scans, and supersolution certificates for fractional diffusion with variable density"
)]
struct Cli {
    /// TOML configuration file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports and data files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare the principal-value, spectral, and closed-form evaluators.
    Flap(RawConfig),
    /// Tabulate the heat kernel profile and check the two-sided bound.
    Kernel(RawConfig),
    /// Classify a problem and verify its supersolution certificate.
    Certify(RawConfig),
    /// Scan the covering remainder integrals across cutoff scales.
    Covering(RawConfig),
    /// Build the Riesz potential and verify the inversion identity.
    Riesz(RawConfig),
    /// Evolve the diffusion problem and run the solution monitors.
    Simulate(RawConfig),
    /// Compute weighted Lebesgue norms of a named field.
    Norm(RawConfig),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => {
            eprintln!("one or more requested checks failed (see the report)");
            ExitCode::from(1)
        }
        Err(e @ RunError::Config { .. }) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<bool, RunError> {
    let (name, flags, default_tol): (&str, &RawConfig, f64) = match &cli.command {
        Command::Flap(f) => ("flap", f, 1e-4),
        Command::Kernel(f) => ("kernel", f, 1e-6),
        Command::Certify(f) => ("certify", f, 1e-8),
        Command::Covering(f) => ("covering", f, 1e-2),
        Command::Riesz(f) => ("riesz", f, 1e-3),
        Command::Simulate(f) => ("simulate", f, 1e-3),
        Command::Norm(f) => ("norm", f, 1e-6),
    };

    let file_cfg: RawConfig = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| RunError::Config {
                what: format!("reading {}: {e}", path.display()),
            })?;
            toml::from_str(&text).map_err(|e| RunError::Config {
                what: format!("parsing {}: {e}", path.display()),
            })?
        }
        None => RawConfig::default(),
    };
    let raw = RawConfig::overlay(file_cfg, flags.clone());
    let cfg = ResolvedConfig::resolve(name, &raw, default_tol);
    validate(&cfg)?;

    let out = report::out_path(&cli.out, name);
    match cli.command {
        Command::Flap(_) => commands::run_flap(&cfg, &out),
        Command::Kernel(_) => commands::run_kernel(&cfg, &out),
        Command::Certify(_) => commands::run_certify(&cfg, &out),
        Command::Covering(_) => commands::run_covering(&cfg, &out),
        Command::Riesz(_) => commands::run_riesz(&cfg, &out),
        Command::Simulate(_) => commands::run_simulate(&cfg, &out),
        Command::Norm(_) => commands::run_norm(&cfg, &out),
    }
}

/// Single-line diagnostics naming the violated invariant.
fn validate(cfg: &ResolvedConfig) -> Result<(), RunError> {
    let bad = |what: &str| Err(RunError::Config { what: what.into() });
    if !(cfg.s > 0.0 && cfg.s < 1.0) {
        return bad("fractional order s must lie in (0, 1)");
    }
    if cfg.dim == 0 {
        return bad("spatial dimension must be at least 1");
    }
    if !(cfg.beta > 0.0) {
        return bad("weight exponent beta must be positive");
    }
    if !(cfg.k > 0.0) {
        return bad("density constant K must be positive");
    }
    if !(cfg.p >= 1.0) {
        return bad("Lebesgue exponent p must be at least 1");
    }
    if !(cfg.tol > 0.0) {
        return bad("tolerance must be positive");
    }
    if !(cfg.horizon > 0.0) {
        return bad("horizon must be positive");
    }
    if !(cfg.dt > 0.0) {
        return bad("time step must be positive");
    }
    if !(cfg.time > 0.0) {
        return bad("time must be positive");
    }
    if cfg.r_list.is_empty() || cfg.r_list.windows(2).any(|w| w[0] >= w[1]) {
        return bad("scale list must be increasing and nonempty");
    }
    if let Some(c0) = cfg.c0 {
        if !(c0 > 0.0) {
            return bad("elliptic floor c0 must be positive");
        }
    }
    if let Some(lambda) = cfg.lambda {
        if !(lambda > 0.0) {
            return bad("lambda must be positive");
        }
    }
    Ok(())
}
