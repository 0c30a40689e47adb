//! The seven command runners. Each builds its inputs from the resolved
//! configuration, runs the checks, writes the report triplet, and
//! returns whether the requested checks passed.

use std::path::Path;

use serde::Serialize;

use certify::{
    CaseLabel, CertificateEngine, CertificateReport, DensityModel, EngineOptions, ProblemSpec,
    Verdict,
};
use covering::{
    decay_rate_fit, remainder_integral, riesz_potential, scaled_ratio_check, RemainderOptions,
    RieszOptions, RieszReport, ScaledRatioScan,
};
use fraclap::{flap_pv, flap_spectral, FracOrder, Grid1, PvOptions, RadialClosedForm, ScalarField};
use heatkernel::{bound_check, BoundReport, KernelProfile, Normalization, ProfileOptions};
use solver::{convolution_crosscheck, energy_monitor, evolve, DensityField};

use crate::config::ResolvedConfig;
use crate::report::{csv_table, emit, Report};
use crate::RunError;

fn order(cfg: &ResolvedConfig) -> Result<FracOrder, RunError> {
    FracOrder::new(cfg.s, cfg.dim).map_err(|e| RunError::Config {
        what: e.to_string(),
    })
}

fn density(cfg: &ResolvedConfig) -> Result<DensityModel, RunError> {
    let d = if cfg.log_correction {
        DensityModel::log_corrected(cfg.k, cfg.s)
    } else {
        DensityModel::power_law(cfg.k, cfg.alpha)
    };
    d.map_err(|e| RunError::Config {
        what: e.to_string(),
    })
}

// ---------------------------------------------------------------------
// flap: three-evaluator comparison table
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct FlapResult {
    gaussian_sup_rel_disagreement: f64,
    weight_sup_rel_disagreement: f64,
    closed_form_constant: f64,
    closed_form_validation_residual: f64,
}

pub fn run_flap(cfg: &ResolvedConfig, out: &Path) -> Result<bool, RunError> {
    let fo = order(cfg)?;
    if cfg.dim != 1 {
        return Err(RunError::Config {
            what: "the evaluator comparison runs in dimension one".into(),
        });
    }
    let pv = PvOptions::default();
    let u = ScalarField::gaussian();

    // spectral route on a large padded box; comparison nodes |x| <= 5
    let grid = Grid1::from_fn(2048.0, 1 << 17, |x| (-x * x).exp()).map_err(numerical)?;
    let spectral = flap_spectral(&grid, fo, 2).map_err(numerical)?;

    let mut rows = Vec::new();
    let mut sup_gap = 0.0_f64;
    let mut sup_val = 0.0_f64;
    for i in 0..=40 {
        let x = -5.0 + 10.0 * i as f64 / 40.0;
        let x_snapped = grid.x(grid.index_of(x));
        let via_pv = flap_pv(&u, &[x_snapped], fo, &pv).map_err(numerical)?.value;
        let via_spec = spectral.values()[grid.index_of(x)];
        sup_gap = sup_gap.max((via_pv - via_spec).abs());
        sup_val = sup_val.max(via_pv.abs().max(via_spec.abs()));
        rows.push(format!("{x_snapped},{via_pv},{via_spec}"));
    }
    let gaussian_rel = sup_gap / sup_val;

    // radial weight route: quadrature against the calibrated closed form
    let closed = RadialClosedForm::calibrate(cfg.beta, fo, &pv).map_err(numerical)?;
    let psi = ScalarField::radial_weight(cfg.beta);
    let mut w_sup_gap = 0.0_f64;
    let mut w_sup_val = 0.0_f64;
    for &r in &[1.5, 2.0, 3.0, 5.0] {
        let via_pv = flap_pv(&psi, &[r], fo, &pv).map_err(numerical)?.value;
        let via_closed = -closed.minus_flap(r).map_err(numerical)?;
        w_sup_gap = w_sup_gap.max((via_pv - via_closed).abs());
        w_sup_val = w_sup_val.max(via_pv.abs());
        rows.push(format!("{r},{via_pv},{via_closed}"));
    }
    let weight_rel = w_sup_gap / w_sup_val;

    let pass = gaussian_rel <= cfg.tol && weight_rel <= cfg.tol;
    let result = FlapResult {
        gaussian_sup_rel_disagreement: gaussian_rel,
        weight_sup_rel_disagreement: weight_rel,
        closed_form_constant: closed.c_hat(),
        closed_form_validation_residual: closed.validation_residual,
    };
    let summary = format!(
        "flap evaluator comparison (s = {}, N = {})\n\
         gaussian sup-relative disagreement (pv vs spectral): {:.3e}\n\
         weight sup-relative disagreement (pv vs closed form): {:.3e}\n\
         tolerance: {:.1e}\n\
         pass: {pass}\n",
        cfg.s, cfg.dim, gaussian_rel, weight_rel, cfg.tol
    );
    emit(
        out,
        &Report {
            config: cfg.clone(),
            pass,
            result,
        },
        &summary,
        Some(("flap.csv", csv_table("x,pv_quadrature,second_route", rows))),
    )?;
    Ok(pass)
}

// ---------------------------------------------------------------------
// kernel: profile table, mass, two-sided bound scan
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct KernelResult {
    mass: f64,
    profile_at_zero: f64,
    bound_ratio_min: f64,
    bound_ratio_max: f64,
    bound_spread: f64,
}

pub fn run_kernel(cfg: &ResolvedConfig, out: &Path) -> Result<bool, RunError> {
    let fo = order(cfg)?;
    let normalization = match cfg.normalization.as_str() {
        "unit-mass" => Normalization::UnitMass,
        "paper-raw" => Normalization::FourierRaw,
        other => {
            return Err(RunError::Config {
                what: format!("unknown normalization `{other}`"),
            })
        }
    };
    let kp =
        KernelProfile::build(fo, normalization, &ProfileOptions::default()).map_err(numerical)?;

    let mass = kp.kernel_mass().map_err(numerical)?;
    let xs: Vec<f64> = (0..=100).map(|i| -100.0 + 2.0 * i as f64).collect();
    let bound: BoundReport = bound_check(&kp, &xs, &cfg.times).map_err(numerical)?;

    let mut rows = Vec::new();
    for i in 0..=200 {
        let r = 10f64.powf(-2.0 + 4.3 * i as f64 / 200.0);
        rows.push(format!("{r},{}", kp.profile_eval(&[r])));
    }

    let mass_target = match normalization {
        Normalization::UnitMass => 1.0,
        Normalization::FourierRaw => (2.0 * std::f64::consts::PI).powi(cfg.dim as i32),
    };
    let pass = (mass - mass_target).abs() <= cfg.tol * mass_target
        && bound.all_finite
        && bound.spread <= 100.0;
    let result = KernelResult {
        mass,
        profile_at_zero: kp.profile_eval(&[0.0]),
        bound_ratio_min: bound.ratio_min,
        bound_ratio_max: bound.ratio_max,
        bound_spread: bound.spread,
    };
    let summary = format!(
        "kernel profile (s = {}, N = {}, {})\n\
         mass: {mass} (target {mass_target}, tolerance {:.1e})\n\
         two-sided bound ratio over the grid: [{:.4}, {:.4}], spread {:.3}\n\
         pass: {pass}\n",
        cfg.s, cfg.dim, cfg.normalization, cfg.tol, bound.ratio_min, bound.ratio_max, bound.spread
    );
    emit(
        out,
        &Report {
            config: cfg.clone(),
            pass,
            result,
        },
        &summary,
        Some(("kernel.csv", csv_table("r,profile", rows))),
    )?;
    Ok(pass)
}

// ---------------------------------------------------------------------
// certify: classification, thresholds, grid verification
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct CertifyResult {
    case: CaseLabel,
    report: Option<CertificateReport>,
}

pub fn run_certify(cfg: &ResolvedConfig, out: &Path) -> Result<bool, RunError> {
    let fo = order(cfg)?;
    let d = density(cfg)?;
    let spec = match cfg.c0 {
        Some(c0) => ProblemSpec::elliptic(fo, d, cfg.beta, cfg.p, c0),
        None => ProblemSpec::parabolic(fo, d, cfg.beta, cfg.p, cfg.horizon),
    }
    .map_err(config_err)?;
    let case = certify::classify(&spec);
    if case == CaseLabel::None {
        let summary = format!(
            "certificate for (N = {}, s = {}, alpha = {}, beta = {})\n\
             classification: NONE (no uniqueness case applies)\n\
             pass: false\n",
            cfg.dim, cfg.s, cfg.alpha, cfg.beta
        );
        emit(
            out,
            &Report {
                config: cfg.clone(),
                pass: false,
                result: CertifyResult { case, report: None },
            },
            &summary,
            None,
        )?;
        return Ok(false);
    }

    let engine = CertificateEngine::new(spec, EngineOptions::default()).map_err(numerical)?;
    let report = if cfg.c0.is_some() {
        engine.verify_elliptic().map_err(numerical)?
    } else {
        let lambda = cfg
            .lambda
            .unwrap_or_else(|| 2.0 * engine.lambda_threshold().max(f64::MIN_POSITIVE));
        engine.verify_parabolic(lambda).map_err(numerical)?
    };
    let pass = report.verdict == Verdict::Pass;

    let rows = report
        .rows
        .iter()
        .map(|r| format!("{},{},{},{}", r.r, r.t, r.residual, r.scale));
    let csv = csv_table("r,t,residual,scale", rows);
    let summary = format!(
        "certificate for (N = {}, s = {}, alpha = {}, beta = {}, K = {})\n\
         classification: {case}\n\
         epsilon = {:.6}, R_epsilon = {}\n\
         constants: C_regime = {:?}, C_hat = {:.6}, M = {:.6}\n\
         threshold: {:.6}, verified at: {:.6}\n\
         extreme scaled residual: {:.3e}\n\
         pass: {pass}\n",
        cfg.dim,
        cfg.s,
        cfg.alpha,
        cfg.beta,
        cfg.k,
        report.epsilon,
        report.r_epsilon,
        report.c_regime,
        report.c_hat,
        report.m_eps_beta,
        report.threshold,
        report.verified_at,
        report.extreme_scaled_residual,
    );
    emit(
        out,
        &Report {
            config: cfg.clone(),
            pass,
            result: CertifyResult {
                case,
                report: Some(report),
            },
        },
        &summary,
        Some(("residuals.csv", csv)),
    )?;
    Ok(pass)
}

// ---------------------------------------------------------------------
// covering: remainder scan and decay fits
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct CoveringResult {
    totals: Vec<(f64, f64)>,
    final_over_initial: f64,
    region_fit_slopes: [f64; 5],
    monotone: bool,
}

pub fn run_covering(cfg: &ResolvedConfig, out: &Path) -> Result<bool, RunError> {
    let fo = order(cfg)?;
    if cfg.dim != 1 {
        return Err(RunError::Config {
            what: "the deterministic covering scan runs in dimension one".into(),
        });
    }
    let beta = cfg.beta;
    let n = cfg.dim as f64;
    let q = (beta + n) / 2.0;
    let u = ScalarField::new(
        move |x: &[f64]| (1.0 + x[0] * x[0]).powf(-q),
        fraclap::DecayClass::PowerDecay {
            exponent: beta + n,
            scale: 1.0,
        },
        fraclap::Smoothness::CInf,
    );
    let phi = ScalarField::radial_weight(beta);
    let opts = RemainderOptions {
        seed: cfg.seed,
        ..Default::default()
    };

    let mut totals = Vec::new();
    let mut regions: Vec<[f64; 5]> = Vec::new();
    let mut rows = Vec::new();
    for &r in &cfg.r_list {
        let scan = remainder_integral(&u, &phi, r, fo, &opts).map_err(numerical)?;
        rows.push(format!(
            "{r},{},{},{},{},{},{},{}",
            scan.per_region[0],
            scan.per_region[1],
            scan.per_region[2],
            scan.per_region[3],
            scan.per_region[4],
            scan.total,
            scan.flap_term
        ));
        totals.push((r, scan.total));
        regions.push(scan.per_region);
    }
    let monotone = totals.windows(2).all(|w| w[1].1 < w[0].1);
    let final_over_initial = totals.last().unwrap().1 / totals[0].1;

    let mut slopes = [f64::NAN; 5];
    if cfg.r_list.len() >= 5 {
        for (k, slope) in slopes.iter_mut().enumerate() {
            let pts: Vec<(f64, f64)> = cfg
                .r_list
                .iter()
                .zip(&regions)
                .skip(1)
                .map(|(&r, reg)| (r, reg[k]))
                .collect();
            *slope = decay_rate_fit(&pts).map_err(numerical)?.slope;
        }
    }

    let pass = monotone;
    let result = CoveringResult {
        totals: totals.clone(),
        final_over_initial,
        region_fit_slopes: slopes,
        monotone,
    };
    let summary = format!(
        "covering remainder scan (s = {}, beta = {})\n\
         scales: {:?}\n\
         totals: {:?}\n\
         final/initial: {:.4e}\n\
         region decay slopes: {:?}\n\
         monotone vanishing: {monotone}\n\
         pass: {pass}\n",
        cfg.s, cfg.beta, cfg.r_list, totals, final_over_initial, slopes
    );
    emit(
        out,
        &Report {
            config: cfg.clone(),
            pass,
            result,
        },
        &summary,
        Some((
            "covering.csv",
            csv_table("R,A1,A2,A3,A4,A5,total,flap_term", rows),
        )),
    )?;
    Ok(pass)
}

// ---------------------------------------------------------------------
// riesz: potential construction, inversion residual, scaled ratio
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct RieszResult {
    report: RieszReport,
    scaled_ratio: Option<ScaledRatioScan>,
}

pub fn run_riesz(cfg: &ResolvedConfig, out: &Path) -> Result<bool, RunError> {
    let fo = order(cfg)?;
    let source = ScalarField::gaussian();
    let phi = riesz_potential(&source, fo, &RieszOptions::default()).map_err(config_or_num)?;
    let mut pass = phi.report.inversion_residual <= cfg.tol
        && phi.report.comparability.0 > 0.0
        && phi.report.comparability.0 < phi.report.comparability.1
        && phi
            .report
            .far_field
            .iter()
            .all(|&(_, ratio)| (ratio - 1.0).abs() <= 0.05);

    // optional scaled-ratio scan when sigma is admissible
    let d = density(cfg)?;
    let pv = PvOptions {
        tol: 5e-7,
        ..Default::default()
    };
    let scaled = scaled_ratio_check(&phi, &d, &cfg.r_list, cfg.sigma, cfg.beta_aux, &pv).ok();
    if let Some(scan) = &scaled {
        pass &= scan.spread <= 5.0;
    }

    let rows = (0..=200).map(|i| {
        let x = 10f64.powf(-1.0 + 3.5 * i as f64 / 200.0);
        format!("{x},{}", phi.eval(x))
    });
    let summary = format!(
        "riesz potential (s = {}, N = {})\n\
         k calibrated: {} (classical {}, gap {:.3e})\n\
         inversion residual: {:.3e} (tolerance {:.1e})\n\
         comparability constants: ({:.4}, {:.4})\n\
         scaled-ratio spread: {:?}\n\
         pass: {pass}\n",
        cfg.s,
        cfg.dim,
        phi.report.k_calibrated,
        phi.report.k_classical,
        phi.report.k_relative_gap,
        phi.report.inversion_residual,
        cfg.tol,
        phi.report.comparability.0,
        phi.report.comparability.1,
        scaled.as_ref().map(|s| s.spread),
    );
    emit(
        out,
        &Report {
            config: cfg.clone(),
            pass,
            result: RieszResult {
                report: phi.report.clone(),
                scaled_ratio: scaled,
            },
        },
        &summary,
        Some(("potential.csv", csv_table("x,phi", rows))),
    )?;
    Ok(pass)
}

// ---------------------------------------------------------------------
// simulate: evolution with monitors and the kernel cross-check
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct SimulateResult {
    steps: usize,
    final_mass: f64,
    l2_monotone: bool,
    crosscheck: Option<f64>,
    weighted_energy_initial: f64,
    weighted_energy_final: f64,
}

pub fn run_simulate(cfg: &ResolvedConfig, out: &Path) -> Result<bool, RunError> {
    let fo = order(cfg)?;
    if cfg.dim != 1 {
        return Err(RunError::Config {
            what: "the forward solver runs in dimension one".into(),
        });
    }
    let grid = Grid1::from_fn(cfg.box_half_width, cfg.resolution, |x| (-x * x).exp())
        .map_err(config_err)?;
    let uniform = cfg.alpha == 0.0 && !cfg.log_correction && (cfg.k - 1.0).abs() < 1e-15;
    let rho = if uniform {
        DensityField::Uniform
    } else {
        DensityField::from_model(&density(cfg)?, cfg.s, &grid).map_err(config_err)?
    };

    let traj = evolve(&grid, &rho, fo, cfg.time, cfg.dt).map_err(|e| match e {
        solver::SolverError::Param { .. } | solver::SolverError::Stability { .. } => {
            RunError::Config {
                what: e.to_string(),
            }
        }
        other => RunError::Numerical {
            what: other.to_string(),
        },
    })?;

    let l2_monotone = traj
        .diagnostics
        .l2
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-12 * traj.diagnostics.l2[0]);

    let crosscheck = if uniform {
        let kp = KernelProfile::build(fo, Normalization::UnitMass, &ProfileOptions::default())
            .map_err(numerical)?;
        let opts = heatkernel::ConvOptions {
            tail_mass_limit: 1e-3,
        };
        Some(convolution_crosscheck(&grid, cfg.time, fo, &kp, &opts).map_err(numerical)?)
    } else {
        None
    };

    let energies = energy_monitor(&traj, &rho, cfg.p, |x, _| fraclap::weight_eval(cfg.beta, x));
    let (e0, et) = (energies.first().unwrap().1, energies.last().unwrap().1);

    let mut pass = l2_monotone || !uniform;
    if let Some(d) = crosscheck {
        pass &= d <= 1e-3;
    }

    // trajectory snapshots, decimated to at most 9 time slices
    let stride = (traj.states.len() / 8).max(1);
    let mut rows = Vec::new();
    for st in traj.states.iter().step_by(stride) {
        for j in (0..st.field.len()).step_by((st.field.len() / 512).max(1)) {
            rows.push(format!(
                "{},{},{}",
                st.time,
                st.field.x(j),
                st.field.values()[j]
            ));
        }
    }

    let result = SimulateResult {
        steps: traj.states.len() - 1,
        final_mass: *traj.diagnostics.mass.last().unwrap(),
        l2_monotone,
        crosscheck,
        weighted_energy_initial: e0,
        weighted_energy_final: et,
    };
    let summary = format!(
        "simulation (s = {}, T = {}, dt = {}, density: {})\n\
         steps: {}\n\
         l2 nonincreasing each step: {l2_monotone}\n\
         kernel cross-check: {:?}\n\
         weighted energy: {e0} -> {et}\n\
         pass: {pass}\n",
        cfg.s,
        cfg.time,
        cfg.dt,
        if uniform { "uniform" } else { "variable" },
        traj.states.len() - 1,
        crosscheck,
    );
    emit(
        out,
        &Report {
            config: cfg.clone(),
            pass,
            result,
        },
        &summary,
        Some(("trajectory.csv", csv_table("t,x,u", rows))),
    )?;
    Ok(pass)
}

// ---------------------------------------------------------------------
// norm: weighted Lebesgue norms of a named field
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct NormResult {
    weighted_integral: f64,
}

pub fn run_norm(cfg: &ResolvedConfig, out: &Path) -> Result<bool, RunError> {
    if cfg.dim != 1 {
        return Err(RunError::Config {
            what: "norm computation runs in dimension one".into(),
        });
    }
    let grid = match cfg.field.as_str() {
        "gaussian" => Grid1::from_fn(cfg.box_half_width, cfg.resolution, |x| (-x * x).exp()),
        "constant" => Grid1::from_fn(cfg.box_half_width, cfg.resolution, |_| 1.0),
        "bump" => Grid1::from_fn(cfg.box_half_width, cfg.resolution, |x| {
            if x.abs() < 3.0 {
                (1.0 - (x / 3.0) * (x / 3.0)).powi(3)
            } else {
                0.0
            }
        }),
        other => {
            return Err(RunError::Config {
                what: format!("unknown field `{other}` (gaussian | constant | bump)"),
            })
        }
    }
    .map_err(config_err)?;
    let value = solver::weighted_lp_norm_field(&grid, cfg.beta, cfg.p);
    let pass = value.is_finite();
    let summary = format!(
        "weighted norm of `{}` (beta = {}, p = {}, box = {})\n\
         integral: {value}\n\
         pass: {pass}\n",
        cfg.field, cfg.beta, cfg.p, cfg.box_half_width
    );
    emit(
        out,
        &Report {
            config: cfg.clone(),
            pass,
            result: NormResult {
                weighted_integral: value,
            },
        },
        &summary,
        None,
    )?;
    Ok(pass)
}

fn numerical<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Numerical {
        what: e.to_string(),
    }
}

fn config_err<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Config {
        what: e.to_string(),
    }
}

/// Upstream errors that may be either misconfiguration or numerics:
/// parameter-style messages map to configuration.
fn config_or_num(e: covering::CoveringError) -> RunError {
    match e {
        covering::CoveringError::Param { what } | covering::CoveringError::Dimension { what } => {
            RunError::Config { what: what.into() }
        }
        other => RunError::Numerical {
            what: other.to_string(),
        },
    }
}
