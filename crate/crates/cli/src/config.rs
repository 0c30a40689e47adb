//! Run configuration: a single TOML document per run, overridable by
//! command-line flags, resolved against one table of defaults and
//! embedded verbatim in every report.

use clap::Args;
use serde::{Deserialize, Serialize};

/// Raw, partially specified configuration (file and/or flags).
#[derive(Debug, Clone, Default, Deserialize, Args)]
pub struct RawConfig {
    /// Fractional order s in (0, 1).
    #[arg(long)]
    pub s: Option<f64>,
    /// Spatial dimension N.
    #[arg(long)]
    pub dim: Option<u32>,
    /// Weight exponent beta.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Density decay rate alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Density constant K.
    #[arg(long)]
    pub k: Option<f64>,
    /// Use the logarithmically corrected density.
    #[arg(long)]
    pub log_correction: Option<bool>,
    /// Lebesgue exponent p.
    #[arg(long)]
    pub p: Option<f64>,
    /// Parabolic horizon T.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Elliptic zero-order floor c0 (switches certify to elliptic mode).
    #[arg(long)]
    pub c0: Option<f64>,
    /// Supersolution rate lambda; defaults to twice the threshold.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Primary tolerance of the command's check.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for the stochastic paths.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cutoff scales for the covering scan.
    #[arg(long, value_delimiter = ',')]
    pub r_list: Option<Vec<f64>>,
    /// Scaled-ratio exponent sigma.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Auxiliary covering exponent for the sigma windows.
    #[arg(long)]
    pub beta_aux: Option<f64>,
    /// Box half-width for grid commands.
    #[arg(long)]
    pub box_half_width: Option<f64>,
    /// Grid resolution (power of two).
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Evolution/evaluation time.
    #[arg(long)]
    pub time: Option<f64>,
    /// Kernel evaluation times.
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Kernel normalization: "unit-mass" or "paper-raw".
    #[arg(long)]
    pub normalization: Option<String>,
    /// Field name for the norm command: gaussian | constant | bump.
    #[arg(long)]
    pub field: Option<String>,
}

impl RawConfig {
    /// Flag values take precedence over the file.
    pub fn overlay(file: RawConfig, flags: RawConfig) -> RawConfig {
        macro_rules! pick {
            ($name:ident) => {
                flags.$name.or(file.$name)
            };
        }
        RawConfig {
            s: pick!(s),
            dim: pick!(dim),
            beta: pick!(beta),
            alpha: pick!(alpha),
            k: pick!(k),
            log_correction: pick!(log_correction),
            p: pick!(p),
            horizon: pick!(horizon),
            c0: pick!(c0),
            lambda: pick!(lambda),
            tol: pick!(tol),
            seed: pick!(seed),
            r_list: pick!(r_list),
            sigma: pick!(sigma),
            beta_aux: pick!(beta_aux),
            box_half_width: pick!(box_half_width),
            resolution: pick!(resolution),
            dt: pick!(dt),
            time: pick!(time),
            times: pick!(times),
            normalization: pick!(normalization),
            field: pick!(field),
        }
    }
}

/// Fully resolved configuration; the single source of defaults. Every
/// report embeds one of these.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub command: String,
    pub s: f64,
    pub dim: u32,
    pub beta: f64,
    pub alpha: f64,
    pub k: f64,
    pub log_correction: bool,
    pub p: f64,
    pub horizon: f64,
    pub c0: Option<f64>,
    pub lambda: Option<f64>,
    pub tol: f64,
    pub seed: u64,
    pub r_list: Vec<f64>,
    pub sigma: f64,
    pub beta_aux: Option<f64>,
    pub box_half_width: f64,
    pub resolution: usize,
    pub dt: f64,
    pub time: f64,
    pub times: Vec<f64>,
    pub normalization: String,
    pub field: String,
}

impl ResolvedConfig {
    pub fn resolve(command: &str, raw: &RawConfig, default_tol: f64) -> Self {
        Self {
            command: command.to_string(),
            s: raw.s.unwrap_or(0.5),
            dim: raw.dim.unwrap_or(1),
            beta: raw.beta.unwrap_or(0.5),
            alpha: raw.alpha.unwrap_or(0.0),
            k: raw.k.unwrap_or(1.0),
            log_correction: raw.log_correction.unwrap_or(false),
            p: raw.p.unwrap_or(1.0),
            horizon: raw.horizon.unwrap_or(1.0),
            c0: raw.c0,
            lambda: raw.lambda,
            tol: raw.tol.unwrap_or(default_tol),
            seed: raw.seed.unwrap_or(20_140_721),
            r_list: raw
                .r_list
                .clone()
                .unwrap_or_else(|| vec![4.0, 8.0, 16.0, 32.0, 64.0]),
            sigma: raw.sigma.unwrap_or(0.2),
            beta_aux: raw.beta_aux,
            box_half_width: raw.box_half_width.unwrap_or(600.0),
            resolution: raw.resolution.unwrap_or(1 << 14),
            dt: raw.dt.unwrap_or(0.01),
            time: raw.time.unwrap_or(0.5),
            times: raw.times.clone().unwrap_or_else(|| vec![0.1, 1.0, 10.0]),
            normalization: raw
                .normalization
                .clone()
                .unwrap_or_else(|| "unit-mass".to_string()),
            field: raw.field.clone().unwrap_or_else(|| "gaussian".to_string()),
        }
    }
}
