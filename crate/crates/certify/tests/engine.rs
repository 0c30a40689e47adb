//! End-to-end certificate runs: thresholds, grid verification, and the
//! structural invariants of the engine.

use certify::{CaseLabel, CertificateEngine, DensityModel, EngineOptions, ProblemSpec, Verdict};
use fraclap::FracOrder;

fn fo1(s: f64) -> FracOrder {
    FracOrder::new(s, 1).unwrap()
}

fn case_two_spec(k: f64) -> ProblemSpec {
    // N=1, s=0.5, alpha=0, beta=0.5: the reference case-II instance
    ProblemSpec::parabolic(
        fo1(0.5),
        DensityModel::power_law(k, 0.0).unwrap(),
        0.5,
        1.0,
        1.0,
    )
    .unwrap()
}

#[test]
fn case_two_certificate_passes_at_twice_threshold() {
    let engine = CertificateEngine::new(case_two_spec(1.0), EngineOptions::default()).unwrap();
    assert_eq!(engine.case(), CaseLabel::II);
    let lambda_min = engine.lambda_threshold();
    assert!(lambda_min.is_finite() && lambda_min > 0.0);
    let report = engine.verify_parabolic(2.0 * lambda_min).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert!(report.extreme_scaled_residual <= -1e-8);
    assert!(report.grid_requirement <= 2.0 * lambda_min);
    // threshold structure: max of the outer and inner expressions
    let c = engine.c_regime().unwrap();
    let outer = (c + engine.epsilon()) * engine.c_hat();
    let r2 = 1.0 + engine.r_epsilon() * engine.r_epsilon();
    let inner = engine.m_eps_beta() * r2.powf(0.25);
    assert!((lambda_min - outer.max(inner)).abs() < 1e-12 * lambda_min);
}

#[test]
fn case_two_failing_lambda_is_reported() {
    let engine = CertificateEngine::new(case_two_spec(1.0), EngineOptions::default()).unwrap();
    // lambda = 0 cannot be strictly negative anywhere the weight term
    // vanishes, and fails outright where -(-Delta)^s psi > 0
    let report = engine.verify_parabolic(0.0).unwrap();
    assert_eq!(report.verdict, Verdict::Fail);
}

#[test]
fn case_one_passes_for_any_positive_lambda() {
    let spec = ProblemSpec::parabolic(
        FracOrder::new(0.5, 3).unwrap(),
        DensityModel::power_law(1.0, 0.0).unwrap(),
        2.0,
        1.0,
        1.0,
    )
    .unwrap();
    let engine = CertificateEngine::new(spec, EngineOptions::default()).unwrap();
    assert_eq!(engine.case(), CaseLabel::I);
    assert_eq!(engine.lambda_threshold(), 0.0);
    for lambda in [1e-3, 0.1, 5.0] {
        let report = engine.verify_parabolic(lambda).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "lambda = {lambda}");
    }
}

#[test]
fn threshold_scales_inversely_with_k() {
    let e1 = CertificateEngine::new(case_two_spec(1.0), EngineOptions::default()).unwrap();
    let e2 = CertificateEngine::new(case_two_spec(2.0), EngineOptions::default()).unwrap();
    let (l1, l2) = (e1.lambda_threshold(), e2.lambda_threshold());
    assert!(
        ((l1 / l2) - 2.0).abs() < 1e-10,
        "doubling K must halve the threshold: {l1} vs {l2}"
    );
}

#[test]
fn certificates_are_stable_upward_in_lambda() {
    let engine = CertificateEngine::new(case_two_spec(1.0), EngineOptions::default()).unwrap();
    let lambda = 2.0 * engine.lambda_threshold();
    let r1 = engine.verify_parabolic(lambda).unwrap();
    let r2 = engine.verify_parabolic(3.0 * lambda).unwrap();
    assert_eq!(r1.verdict, Verdict::Pass);
    assert_eq!(r2.verdict, Verdict::Pass);
    // the scaled residual (the pass criterion) strictly decreases in
    // lambda at every node since rho > 0; the raw residual also carries
    // the e^{-lambda t} damping and is not itself monotone
    for (a, b) in r1.rows.iter().zip(&r2.rows) {
        assert!(
            b.residual / b.scale <= a.residual / a.scale + 1e-15,
            "scaled residual grew at r={} t={}",
            a.r,
            a.t
        );
    }
}

#[test]
fn elliptic_case_two_passes_at_twice_threshold() {
    let engine = {
        let threshold_probe =
            CertificateEngine::new(case_two_spec(1.0), EngineOptions::default()).unwrap();
        let pc0k_min = threshold_probe.elliptic_threshold();
        // choose c0 so that p c0 K is twice the threshold
        let spec = ProblemSpec::elliptic(
            fo1(0.5),
            DensityModel::power_law(1.0, 0.0).unwrap(),
            0.5,
            1.0,
            2.0 * pc0k_min,
        )
        .unwrap();
        CertificateEngine::new(spec, EngineOptions::default()).unwrap()
    };
    let report = engine.verify_elliptic().unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert!(report.extreme_scaled_residual >= 1e-8);
    assert!(report.verified_at >= 2.0 * report.threshold * 0.999);
}

#[test]
fn elliptic_case_one_needs_no_floor_size() {
    let spec = ProblemSpec::elliptic(
        FracOrder::new(0.5, 3).unwrap(),
        DensityModel::power_law(1.0, 0.0).unwrap(),
        2.0,
        1.0,
        1e-6,
    )
    .unwrap();
    let engine = CertificateEngine::new(spec, EngineOptions::default()).unwrap();
    assert_eq!(engine.case(), CaseLabel::I);
    let report = engine.verify_elliptic().unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
}

#[test]
fn case_three_log_corrected_certificate() {
    let spec = ProblemSpec::parabolic(
        fo1(0.5),
        DensityModel::log_corrected(1.0, 0.5).unwrap(),
        1.0, // beta = N
        1.0,
        1.0,
    )
    .unwrap();
    let engine = CertificateEngine::new(spec, EngineOptions::default()).unwrap();
    assert_eq!(engine.case(), CaseLabel::III);
    let lambda_min = engine.lambda_threshold();
    // the inner branch of the threshold is 1/(K s e)
    let inner = 1.0 / (0.5 * std::f64::consts::E);
    let outer = (engine.c_regime().unwrap() + engine.epsilon()) * engine.c_hat();
    assert!((lambda_min - outer.max(inner)).abs() < 1e-12 * lambda_min);
    // verify at a lambda that also covers the grid requirement, in case
    // the paper's inner bound is not pointwise sufficient on this grid
    let probe = engine.verify_parabolic(2.0 * lambda_min).unwrap();
    let lambda = 2.0 * lambda_min.max(probe.grid_requirement);
    let report = engine.verify_parabolic(lambda).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
}

#[test]
fn case_four_certificate() {
    let spec = ProblemSpec::parabolic(
        fo1(0.75),
        DensityModel::power_law(1.0, 0.0).unwrap(),
        2.5,
        1.0,
        1.0,
    )
    .unwrap();
    let engine = CertificateEngine::new(spec, EngineOptions::default()).unwrap();
    assert_eq!(engine.case(), CaseLabel::IV);
    let lambda_min = engine.lambda_threshold();
    let report = engine.verify_parabolic(2.0 * lambda_min).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
}

#[test]
fn unclassified_parameters_are_rejected() {
    let spec = ProblemSpec::parabolic(
        fo1(0.5),
        DensityModel::power_law(1.0, 3.0).unwrap(),
        0.9,
        1.0,
        1.0,
    )
    .unwrap();
    assert_eq!(certify::classify(&spec), CaseLabel::None);
    assert!(CertificateEngine::new(spec, EngineOptions::default()).is_err());
}

#[test]
fn weight_comparability_constant_is_sharp() {
    // sup over r of (psi + |psi'|) / psi equals 1 + beta/2
    let beta = 0.5;
    let mut sup: f64 = 0.0;
    for i in 0..=4000 {
        let r = i as f64 * 0.01;
        let psi = fraclap::weight_eval(beta, r);
        let dpsi = fraclap::weight_first_derivative(beta, r).abs();
        sup = sup.max((psi + dpsi) / psi);
    }
    assert!(sup <= 1.0 + beta / 2.0 + 1e-12, "sup {sup}");
    assert!(sup >= 1.0 + beta / 2.0 - 1e-3);
}
