//! Acceptance suite: the twelve release criteria, each printing one
//! pass/fail line (run with `--nocapture` to see them on success).
//!
//! Every tolerance is pinned here, in code. Each criterion is a
//! separate test so failures localize.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use certify::{
    classify, regime_constant, regime_constant_via_limits, CaseLabel, CertificateEngine,
    DensityModel, EngineOptions, ProblemSpec, Verdict,
};
use covering::{decay_rate_fit, remainder_integral, riesz_potential, scaled_ratio_check};
use fraclap::{
    convexity_check, cutoff_flap, flap_pv, flap_spectral, radial_shape,
    radial_supersolution_criterion, weight_ode_lhs, CutoffFamily, FracOrder, Grid1, PvOptions,
    RadialClosedForm, ScalarField,
};
use heatkernel::{bound_check, KernelProfile, Normalization, ProfileOptions};
use solver::{convolution_crosscheck, evolve, DensityField};
use specfun::{hyp2f1, limit_classify, regime_normalizer, regime_normalizer_corrected, HypParams};

fn fo(n: u32, s: f64) -> FracOrder {
    FracOrder::new(s, n).unwrap()
}

fn pass_line(criterion: u32, description: &str) {
    println!("criterion {criterion}: PASS - {description}");
}

fn unit_mass_profile(s: f64) -> &'static KernelProfile {
    static P25: OnceLock<KernelProfile> = OnceLock::new();
    static P50: OnceLock<KernelProfile> = OnceLock::new();
    static P75: OnceLock<KernelProfile> = OnceLock::new();
    let cell = if s == 0.25 {
        &P25
    } else if s == 0.5 {
        &P50
    } else {
        &P75
    };
    cell.get_or_init(|| {
        KernelProfile::build(
            fo(1, s),
            Normalization::UnitMass,
            &ProfileOptions::default(),
        )
        .unwrap()
    })
}

/// Criterion 1: for u(x) = e^{-x^2} in dimension one and s in
/// {0.25, 0.5, 0.75}, the principal-value and spectral evaluators agree
/// to 1e-4 sup-relative on |x| <= 5; for the radial weight the
/// principal-value route agrees with the calibrated hypergeometric
/// closed form to the same tolerance.
#[test]
fn criterion_01_oracle_triangle() {
    let tol = 1e-4;
    let pv_opts = PvOptions::default();
    let u = ScalarField::gaussian();
    for s in [0.25, 0.5, 0.75] {
        let order = fo(1, s);
        let grid = Grid1::from_fn(1024.0, 1 << 16, |x| (-x * x).exp()).unwrap();
        let spectral = flap_spectral(&grid, order, 2).unwrap();
        let mut sup_gap = 0.0_f64;
        let mut sup_val = 0.0_f64;
        for i in 0..=40 {
            let x = grid.x(grid.index_of(-5.0 + 10.0 * i as f64 / 40.0));
            let a = flap_pv(&u, &[x], order, &pv_opts).unwrap().value;
            let b = spectral.values()[grid.index_of(x)];
            sup_gap = sup_gap.max((a - b).abs());
            sup_val = sup_val.max(a.abs().max(b.abs()));
        }
        assert!(
            sup_gap / sup_val <= tol,
            "s={s}: gaussian disagreement {}",
            sup_gap / sup_val
        );

        let beta = 1.5;
        let closed = RadialClosedForm::calibrate(beta, order, &pv_opts).unwrap();
        let psi = ScalarField::radial_weight(beta);
        let mut w_gap = 0.0_f64;
        let mut w_val = 0.0_f64;
        for &r in &[1.5, 2.0, 3.0, 5.0] {
            let a = flap_pv(&psi, &[r], order, &pv_opts).unwrap().value;
            let b = -closed.minus_flap(r).unwrap();
            w_gap = w_gap.max((a - b).abs());
            w_val = w_val.max(a.abs());
        }
        assert!(
            w_gap / w_val <= tol,
            "s={s}: weight-route disagreement {}",
            w_gap / w_val
        );
    }
    pass_line(
        1,
        "evaluator routes agree to 1e-4 for s in {0.25, 0.5, 0.75}",
    );
}

/// Criterion 2: the s = 1/2 unit-mass kernel equals the closed form
/// t / (pi (t^2 + x^2)) to 1e-6 relative on [-20, 20] x {0.1, 1, 10},
/// and its mass is 1 to 1e-6 (the self-similar construction makes the
/// mass identical for every t, so one quadrature covers all three).
#[test]
fn criterion_02_poisson_kernel_exactness() {
    let kp = unit_mass_profile(0.5);
    for t in [0.1, 1.0, 10.0] {
        for i in 0..=80 {
            let x = -20.0 + 40.0 * i as f64 / 80.0;
            let got = kp.kernel_eval(&[x], t).unwrap();
            let want = t / (PI * (t * t + x * x));
            assert!(
                ((got - want) / want).abs() <= 1e-6,
                "t={t} x={x}: rel {}",
                ((got - want) / want).abs()
            );
        }
    }
    let mass = kp.kernel_mass().unwrap();
    assert!((mass - 1.0).abs() <= 1e-6, "mass {mass}");
    pass_line(
        2,
        "unit-mass kernel matches the closed form and has unit mass",
    );
}

/// Criterion 3: for s in {0.25, 0.5, 0.75} the ratio of the kernel to
/// min{t^{-1/2s}, t |x|^{-1-2s}} is finite, positive, and its grid
/// max/min stays below 100 over [-100, 100] x [0.01, 10].
#[test]
fn criterion_03_two_sided_bound() {
    let xs: Vec<f64> = (0..=100).map(|i| -100.0 + 2.0 * i as f64).collect();
    let ts: Vec<f64> = (0..=12)
        .map(|i| 0.01 * (10.0_f64 / 0.01).powf(i as f64 / 12.0))
        .collect();
    for s in [0.25, 0.5, 0.75] {
        let rep = bound_check(unit_mass_profile(s), &xs, &ts).unwrap();
        assert!(rep.all_finite && rep.ratio_min > 0.0, "s={s}: {rep:?}");
        assert!(rep.spread <= 100.0, "s={s}: spread {}", rep.spread);
    }
    pass_line(3, "two-sided kernel bound holds with spread below 100");
}

/// Criterion 4: the cutoff scaling identity
/// (-Delta)^s gamma_R(x) = R^{-2s} ((-Delta)^s gamma)(x/R) holds to
/// 1e-8 at R in {2, 8, 32}, and one constant bounds R^{2s} sup
/// |(-Delta)^s gamma_R| across all three scales.
#[test]
fn criterion_04_cutoff_scaling() {
    let s = 0.5;
    let order = fo(1, s);
    let opts = PvOptions {
        tol: 1e-11,
        ..Default::default()
    };
    let unit = CutoffFamily::new(1.0).unwrap();
    let mut scaled_sups = Vec::new();
    for r_scale in [2.0, 8.0, 32.0] {
        let cf = CutoffFamily::new(r_scale).unwrap();
        for frac in [0.3, 0.5, 0.75, 1.2] {
            let x = frac * r_scale;
            let lhs = cutoff_flap(&cf, &[x], order, &opts).unwrap().value;
            let rhs = r_scale.powf(-2.0 * s)
                * cutoff_flap(&unit, &[x / r_scale], order, &opts)
                    .unwrap()
                    .value;
            assert!(
                (lhs - rhs).abs() <= 1e-8,
                "R={r_scale} x={x}: identity gap {}",
                (lhs - rhs).abs()
            );
        }
        let sup = (0..=24)
            .map(|i| {
                let x = r_scale * (i as f64) / 12.0;
                cutoff_flap(&cf, &[x], order, &opts).unwrap().value.abs()
            })
            .fold(0.0, f64::max);
        scaled_sups.push(sup * r_scale.powf(2.0 * s));
    }
    let (lo, hi) = scaled_sups
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    assert!(
        (hi - lo) / hi <= 1e-3,
        "scaled sup not uniform across scales: {scaled_sups:?}"
    );
    pass_line(
        4,
        "cutoff scaling identity exact and sup bound uniform in R",
    );
}

/// Criterion 5: for ten seeded random (N, s, beta) with
/// 0 < beta <= N - 2s, the closed-form shape of -(-Delta)^s psi is
/// nonpositive at forty log-spaced radii and agrees in sign with the
/// radial second-order criterion at every node.
#[test]
fn criterion_05_case_one_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut done = 0;
    while done < 10 {
        let n = rng.gen_range(1..=5u32);
        let s: f64 = rng.gen_range(0.05..0.95);
        if n as f64 - 2.0 * s <= 0.0 {
            continue;
        }
        let beta = rng.gen_range(1e-3..=(n as f64 - 2.0 * s));
        let order = fo(n, s);
        let criterion = radial_supersolution_criterion(beta, order);
        assert!(criterion.holds, "N={n} s={s} beta={beta} should hold");
        for i in 0..40 {
            let r = 10f64.powf(-1.0 + 3.0 * i as f64 / 39.0);
            let shape = radial_shape(beta, order, r).unwrap();
            let ode = weight_ode_lhs(beta, order, r);
            assert!(
                shape <= 1e-12,
                "N={n} s={s} beta={beta} r={r}: shape {shape} positive"
            );
            assert!(
                ode <= 1e-15,
                "N={n} s={s} beta={beta} r={r}: ode sign {ode} disagrees"
            );
        }
        done += 1;
    }
    pass_line(
        5,
        "case-one sign certified for ten random parameter triples",
    );
}

/// Criterion 6: per regime, F at z = 1 - 1e-8 divided by the regime
/// normalizer (with its first correction term, which the logarithmic
/// regime needs for convergence faster than 1/log) is within 1e-3 of
/// the limit constant; the case constants match the gamma-formula route
/// against the generic limit machinery to 1e-10.
#[test]
fn criterion_06_unit_argument_asymptotics() {
    let z = 1.0 - 1e-8;
    // one parameter set per case/regime: II, III, IV
    let params = [
        (1u32, 0.5, 0.5, 0.0),  // II
        (1u32, 0.5, 1.0, 0.0),  // III (beta = N)
        (1u32, 0.5, 2.5, -0.5), // IV
    ];
    for (n, s, beta, alpha) in params {
        let spec = ProblemSpec::parabolic(
            fo(n, s),
            DensityModel::power_law(1.0, alpha).unwrap(),
            beta,
            1.0,
            1.0,
        )
        .unwrap();
        let c_formula = regime_constant(&spec).unwrap();
        let c_limits = regime_constant_via_limits(&spec).unwrap();
        assert!(
            ((c_formula - c_limits) / c_formula).abs() <= 1e-10,
            "constants disagree: {c_formula} vs {c_limits}"
        );
        let (a, b, c) = (-s, beta / 2.0 + s, n as f64 / 2.0);
        let lc = limit_classify(a, b, c).unwrap();
        let f_val = hyp2f1(&HypParams::new(a, b, c, z).unwrap()).unwrap();
        let norm = regime_normalizer_corrected(&lc, a, b, z).unwrap();
        let rel = (f_val / norm - lc.constant).abs() / lc.constant.abs();
        assert!(
            rel <= 1e-3,
            "case (beta = {beta}): normalized value off by {rel}"
        );
        // the power regime's plain normalizer also converges here, its
        // correction being of order (1-z)^{(beta-N)/2} = 1e-6; the
        // finite regime's correction (1-z)^{(N-beta)/2} is only 1e-2 at
        // this z, which is exactly what the corrected normalizer absorbs
        if lc.regime == specfun::Regime::PowerDivergent {
            let plain = f_val / regime_normalizer(&lc, z);
            assert!((plain - lc.constant).abs() / lc.constant.abs() <= 1e-3);
        }
    }
    pass_line(6, "unit-argument limits match their constants per regime");
}

/// Criterion 7: the reference case-II instance classifies as II, its
/// parabolic certificate passes at twice the threshold with margin
/// 1e-8 of the local scale, and the elliptic analogue passes with
/// p c0 K at twice the elliptic threshold.
#[test]
fn criterion_07_certificate_end_to_end() {
    let density = || DensityModel::power_law(1.0, 0.0).unwrap();
    let spec = ProblemSpec::parabolic(fo(1, 0.5), density(), 0.5, 1.0, 1.0).unwrap();
    assert_eq!(classify(&spec), CaseLabel::II);
    let engine = CertificateEngine::new(spec, EngineOptions::default()).unwrap();
    let lambda = 2.0 * engine.lambda_threshold();
    let report = engine.verify_parabolic(lambda).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert!(report.extreme_scaled_residual <= -1e-8);

    let pc0k = 2.0 * engine.elliptic_threshold();
    let espec = ProblemSpec::elliptic(fo(1, 0.5), density(), 0.5, 1.0, pc0k).unwrap();
    let eengine = CertificateEngine::new(espec, EngineOptions::default()).unwrap();
    let ereport = eengine.verify_elliptic().unwrap();
    assert_eq!(ereport.verdict, Verdict::Pass);
    assert!(ereport.extreme_scaled_residual >= 1e-8);
    pass_line(
        7,
        "case-II parabolic and elliptic certificates pass at 2x threshold",
    );
}

/// Criterion 8: with s = 0.85, beta = 1 the remainder scan over
/// R in {4, ..., 64} decreases monotonically with a two-order drop;
/// the A2 rate sits within 0.3 of -2s two-sidedly and the other regions
/// decay at least at their stated rates (fits on the asymptotic window
/// {8..64}; at R = 4 the inner regions still straddle the core of u).
#[test]
fn criterion_08_remainder_vanishing() {
    let s = 0.85;
    let beta = 1.0;
    let order = fo(1, s);
    let u = ScalarField::new(
        move |x: &[f64]| (1.0 + x[0] * x[0]).powf(-(beta + 1.0) / 2.0),
        fraclap::DecayClass::PowerDecay {
            exponent: beta + 1.0,
            scale: 1.0,
        },
        fraclap::Smoothness::CInf,
    );
    let phi = ScalarField::radial_weight(beta);
    let opts = covering::RemainderOptions::default();
    let scales = [4.0, 8.0, 16.0, 32.0, 64.0];
    let mut totals = Vec::new();
    let mut regions = Vec::new();
    for &r in &scales {
        let scan = remainder_integral(&u, &phi, r, order, &opts).unwrap();
        totals.push((r, scan.total));
        regions.push(scan.per_region);
    }
    for w in totals.windows(2) {
        assert!(w[1].1 < w[0].1, "not monotone: {totals:?}");
    }
    let ratio = totals[4].1 / totals[0].1;
    assert!(ratio <= 1e-2, "final/initial {ratio}");

    let two_s = 2.0 * s;
    let fit = |k: usize| {
        let pts: Vec<(f64, f64)> = scales
            .iter()
            .zip(&regions)
            .skip(1)
            .map(|(&r, reg): (&f64, &[f64; 5])| (r, reg[k]))
            .collect();
        decay_rate_fit(&pts).unwrap().slope
    };
    let a2 = fit(1);
    assert!((a2 + two_s).abs() <= 0.3, "A2 rate {a2} vs {}", -two_s);
    for k in [2usize, 3] {
        let rate = fit(k);
        assert!(rate <= -two_s + 0.3, "region {} rate {rate}", k + 1);
    }
    let a5 = fit(4);
    assert!(a5 <= 1.0 - two_s + 0.3, "A5 rate {a5}");
    pass_line(8, "remainder integrals vanish at their stated rates");
}

/// Criterion 9: the Riesz potential of a gaussian source at s = 1/4
/// inverts the operator to 1e-3 sup-relative and carries finite
/// two-sided comparability constants.
#[test]
fn criterion_09_riesz_inversion() {
    let phi = riesz_potential(
        &ScalarField::gaussian(),
        fo(1, 0.25),
        &covering::RieszOptions::default(),
    )
    .unwrap();
    assert!(
        phi.report.inversion_residual <= 1e-3,
        "residual {}",
        phi.report.inversion_residual
    );
    let (c0, c1) = phi.report.comparability;
    assert!(c0 > 0.0 && c0 < c1 && c1.is_finite());
    pass_line(
        9,
        "Riesz inversion residual below 1e-3 with finite comparability",
    );
}

/// Criterion 10: the R^sigma-scaled commutator ratio varies by at most
/// a factor of five across R in {4, 8, 16, 32} for an admissible
/// (alpha, beta_aux, sigma) triple.
#[test]
fn criterion_10_scaled_ratio() {
    let phi = riesz_potential(
        &ScalarField::gaussian(),
        fo(1, 0.25),
        &covering::RieszOptions::default(),
    )
    .unwrap();
    let density = DensityModel::power_law(1.0, 0.0).unwrap();
    let pv = PvOptions {
        tol: 5e-7,
        ..Default::default()
    };
    let scan =
        scaled_ratio_check(&phi, &density, &[4.0, 8.0, 16.0, 32.0], 0.2, Some(0.8), &pv).unwrap();
    assert!(scan.windows.admissible);
    assert!(
        scan.spread <= 5.0,
        "spread {} ({:?})",
        scan.spread,
        scan.sups
    );
    pass_line(
        10,
        "scaled commutator ratio uniform within a factor of five",
    );
}

/// Criterion 11: solver checks. Zero data stays identically zero; a
/// single mode decays exactly; the kernel-convolution route agrees to
/// 1e-3; the discrete L2 energy never grows for uniform density; and
/// halving dt against a quarter-step reference improves the variable
/// density error by at least 1.8.
#[test]
fn criterion_11_solver() {
    let order = fo(1, 0.5);

    let zero = Grid1::new(10.0, 64).unwrap();
    let traj = evolve(&zero, &DensityField::Uniform, order, 1.0, 0.125).unwrap();
    assert!(traj
        .states
        .iter()
        .all(|st| st.field.values().iter().all(|&v| v == 0.0)));

    let mode = Grid1::from_fn(PI, 64, |x| (2.0 * x).cos()).unwrap();
    let out = evolve(&mode, &DensityField::Uniform, order, 1.5, 0.5).unwrap();
    let decay = (-2.0_f64 * 1.5).exp();
    for j in 0..mode.len() {
        assert!((out.final_state().field.values()[j] - decay * mode.values()[j]).abs() < 1e-13);
    }

    let kp = unit_mass_profile(0.5);
    let u0 = Grid1::from_fn(700.0, 1 << 15, |x| (-x * x).exp()).unwrap();
    let d = convolution_crosscheck(
        &u0,
        0.5,
        order,
        kp,
        &heatkernel::ConvOptions {
            tail_mass_limit: 1e-3,
        },
    )
    .unwrap();
    assert!(d <= 1e-3, "crosscheck {d}");

    let bumpy = Grid1::from_fn(20.0, 512, |x| {
        (-x * x).exp() * (1.0 + 0.5 * (3.0 * x).sin())
    })
    .unwrap();
    let traj = evolve(&bumpy, &DensityField::Uniform, order, 1.0, 0.05).unwrap();
    let e0 = traj.diagnostics.l2[0];
    for w in traj.diagnostics.l2.windows(2) {
        assert!(w[1] <= w[0] + 1e-12 * e0);
    }

    let grid = Grid1::from_fn(30.0, 1024, |x| (-x * x).exp()).unwrap();
    let rho_vals: Vec<f64> = (0..grid.len())
        .map(|j| (1.0 + grid.x(j) * grid.x(j)).powf(-0.5))
        .collect();
    let rho = DensityField::from_values(rho_vals).unwrap();
    let lambda_max = PI * grid.len() as f64 / grid.half_width();
    let dt0 = 0.4 * (1.0 + 900.0_f64).powf(-0.5) / lambda_max;
    let run = |dt: f64| {
        evolve(&grid, &rho, order, 0.1, dt)
            .unwrap()
            .final_state()
            .field
            .clone()
    };
    let sup = |a: &Grid1, b: &Grid1| {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0_f64, f64::max)
    };
    let reference = run(dt0 / 4.0);
    let factor = sup(&run(dt0), &reference) / sup(&run(dt0 / 2.0), &reference);
    assert!(factor >= 1.8, "self-convergence factor {factor}");

    pass_line(
        11,
        "solver exactness, dissipativity, cross-check, convergence",
    );
}

/// Criterion 12: the convexity inequality holds to 1e-4 at ten seeded
/// random points for (p, alpha) in {(1, 1), (2, 0.01)} with the
/// gaussian field.
#[test]
fn criterion_12_convexity_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let points: Vec<f64> = (0..10).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let u = ScalarField::gaussian();
    let order = fo(1, 0.5);
    for (p, alpha) in [(1.0, 1.0), (2.0, 0.01)] {
        let rep = convexity_check(&u, p, alpha, &points, order, &PvOptions::default()).unwrap();
        assert!(
            rep.max_slack <= 1e-4,
            "(p, alpha) = ({p}, {alpha}): slack {}",
            rep.max_slack
        );
    }
    pass_line(12, "convexity inequality verified at ten random points");
}

/// The CLI pipeline end to end: the reference certify run exits 0 and
/// a malformed configuration names its violated invariant with exit 2.
#[test]
fn cli_pipeline_round_trip() {
    let exe = env!("CARGO_BIN_EXE_fraccert");
    let dir = std::env::temp_dir().join("fraccert-acceptance");
    let _ = std::fs::remove_dir_all(&dir);

    let ok = std::process::Command::new(exe)
        .args([
            "certify", "--s", "0.5", "--dim", "1", "--alpha", "0", "--beta", "0.5", "--k", "1",
            "--p", "1",
        ])
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(
        ok.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let report = std::fs::read_to_string(dir.join("certify/report.toml")).unwrap();
    assert!(report.contains("case = \"II\""));
    assert!(report.contains("pass = true"));

    // identical configuration produces byte-identical reports
    let rerun_dir = dir.join("rerun");
    let rerun = std::process::Command::new(exe)
        .args([
            "certify", "--s", "0.5", "--dim", "1", "--alpha", "0", "--beta", "0.5", "--k", "1",
            "--p", "1",
        ])
        .arg("--out")
        .arg(&rerun_dir)
        .output()
        .unwrap();
    assert_eq!(rerun.status.code(), Some(0));
    let report2 = std::fs::read_to_string(rerun_dir.join("certify/report.toml")).unwrap();
    assert_eq!(
        report.replace("rerun/", ""),
        report2.replace("rerun/", ""),
        "reports must be byte-identical across reruns"
    );

    let bad = std::process::Command::new(exe)
        .args(["certify", "--beta=-2"])
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let err = String::from_utf8_lossy(&bad.stderr);
    assert!(
        err.contains("beta must be positive"),
        "diagnostic should name the invariant: {err}"
    );
}
