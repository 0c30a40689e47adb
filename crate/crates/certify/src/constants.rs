//! The positive regime constants of the outer-region supersolution
//! estimates, with a cross-check through the generic unit-argument
//! limit machinery.
//!
//! For the transformed hypergeometric parameters (-s, beta/2 + s, N/2)
//! the three constants are exactly minus the limit constants of the
//! finite, logarithmic, and power regimes; the gamma-argument reading
//! Gamma(N/2 + s) is the one consistent with that cross-check.

use specfun::{gamma_fn, limit_classify, Regime};

use crate::problem::{classify, CaseLabel, ProblemSpec};
use crate::CertifyError;

/// The case constant from the explicit gamma formulas:
/// case II:  -G(N/2) G((N-b)/2) / (G(N/2+s) G((N-b)/2 - s))
/// case III: -G(b/2) / (G(-s) G(b/2+s)) with b = N
/// case IV:  -G(N/2) G((b-N)/2) / (G(-s) G(b/2+s))
pub fn regime_constant(spec: &ProblemSpec) -> Result<f64, CertifyError> {
    let n = spec.dim as f64;
    let s = spec.s;
    let b = spec.beta;
    let g = |x: f64| gamma_fn(x).map_err(CertifyError::from);
    let value = match classify(spec) {
        CaseLabel::II => {
            -g(n / 2.0)? * g((n - b) / 2.0)? / (g(n / 2.0 + s)? * g((n - b) / 2.0 - s)?)
        }
        CaseLabel::III => -g(b / 2.0)? / (g(-s)? * g(b / 2.0 + s)?),
        CaseLabel::IV => -g(n / 2.0)? * g((b - n) / 2.0)? / (g(-s)? * g(b / 2.0 + s)?),
        other => {
            return Err(CertifyError::WrongCase {
                what: "regime constants exist for cases II, III, IV only",
                case: other,
            })
        }
    };
    if !(value > 0.0) {
        return Err(CertifyError::Numerical {
            what: "regime constant failed its positivity guarantee",
        });
    }
    Ok(value)
}

/// Independent route: classify the transformed parameters
/// (-s, beta/2 + s, N/2) at unit argument and negate the limit constant.
/// Also checks that the regime kind matches the case label.
pub fn regime_constant_via_limits(spec: &ProblemSpec) -> Result<f64, CertifyError> {
    let n = spec.dim as f64;
    let s = spec.s;
    let b = spec.beta;
    let lc = limit_classify(-s, b / 2.0 + s, n / 2.0)?;
    let expected = match classify(spec) {
        CaseLabel::II => Regime::FiniteLimit,
        CaseLabel::III => Regime::LogDivergent,
        CaseLabel::IV => Regime::PowerDivergent,
        other => {
            return Err(CertifyError::WrongCase {
                what: "regime constants exist for cases II, III, IV only",
                case: other,
            })
        }
    };
    if lc.regime != expected {
        return Err(CertifyError::Numerical {
            what: "limit regime disagrees with the case classification",
        });
    }
    Ok(-lc.constant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensityModel;
    use fraclap::FracOrder;

    fn spec(n: u32, s: f64, alpha: f64, beta: f64) -> ProblemSpec {
        ProblemSpec::parabolic(
            FracOrder::new(s, n).unwrap(),
            DensityModel::power_law(1.0, alpha).unwrap(),
            beta,
            1.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn case_two_agrees_with_limit_machinery() {
        for (n, s, beta) in [(1, 0.5, 0.5), (2, 0.25, 1.7), (3, 0.4, 2.5), (1, 0.9, 0.9)] {
            let sp = spec(n, s, 0.0, beta);
            let direct = regime_constant(&sp).unwrap();
            let via = regime_constant_via_limits(&sp).unwrap();
            assert!(
                ((direct - via) / direct).abs() < 1e-10,
                "N={n} s={s} beta={beta}: {direct} vs {via}"
            );
            assert!(direct > 0.0);
        }
    }

    #[test]
    fn case_three_constant_positive() {
        // C = -G(N/2) / (G(-s) G(N/2+s)) > 0 because G(-s) < 0
        let sp = spec(1, 0.5, 0.0, 1.0);
        let c = regime_constant(&sp).unwrap();
        let want = -gamma_fn(0.5).unwrap() / (gamma_fn(-0.5).unwrap() * gamma_fn(1.0).unwrap());
        assert!((c - want).abs() < 1e-14);
        assert!(c > 0.0);
        let via = regime_constant_via_limits(&sp).unwrap();
        assert!(((c - via) / c).abs() < 1e-10);
    }

    #[test]
    fn case_four_frozen_value() {
        // N=1, s=0.5, beta=2.5 (with alpha = -0.5 so that
        // alpha + beta <= 2s + N): the gammas collapse to exactly 2/3
        let sp = spec(1, 0.5, -0.5, 2.5);
        let c = regime_constant(&sp).unwrap();
        assert!((c - 2.0 / 3.0).abs() < 1e-13, "{c}");
        let via = regime_constant_via_limits(&sp).unwrap();
        assert!(((c - via) / c).abs() < 1e-10);
    }

    #[test]
    fn case_one_has_no_constant() {
        let sp = spec(3, 0.5, 0.0, 1.0);
        assert!(matches!(
            regime_constant(&sp),
            Err(CertifyError::WrongCase { .. })
        ));
    }
}
