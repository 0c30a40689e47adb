//! Classification of F(a, b; c; z) as z -> 1^- into the three limit
//! regimes, with the limiting constants expressed through gamma values.
//!
//! - c > a + b: F tends to a finite limit;
//! - c = a + b: F / (-log(1-z)) tends to a constant;
//! - c < a + b: F * (1-z)^{a+b-c} tends to a constant.

use crate::gamma::{gamma_fn, is_nonpositive_integer};
use crate::SpecFunError;

/// Ties |c - a - b| below this are treated as the logarithmic regime;
/// boundary parameter sets hit c = a + b exactly in exact arithmetic.
pub const REGIME_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    FiniteLimit,
    LogDivergent,
    PowerDivergent,
}

#[derive(Debug, Clone, Copy)]
pub struct LimitClass {
    pub regime: Regime,
    /// The limiting constant of F divided by the regime normalizer
    /// (1 for the finite regime, -log(1-z) for the logarithmic one,
    /// (1-z)^{c-a-b} for the power one).
    pub constant: f64,
    /// c - a - b; the power-regime normalizer exponent.
    pub exponent: f64,
}

/// The normalizer the constant refers to, evaluated at argument z.
pub fn regime_normalizer(class: &LimitClass, z: f64) -> f64 {
    match class.regime {
        Regime::FiniteLimit => 1.0,
        Regime::LogDivergent => -(1.0 - z).ln(),
        Regime::PowerDivergent => (1.0 - z).powf(class.exponent),
    }
}

/// Normalizer with the first correction term of the unit-argument
/// expansion folded in. The plain normalizers approach the constant
/// only at rate (1-z)^{|c-a-b|} (or 1/|log(1-z)| in the logarithmic
/// regime), which is slow when |c-a-b| is small; one correction term
/// restores O(1-z) convergence. Near-integer exponents fall back to
/// the plain normalizer (their corrections carry logarithms).
pub fn regime_normalizer_corrected(
    class: &LimitClass,
    a: f64,
    b: f64,
    z: f64,
) -> Result<f64, SpecFunError> {
    use crate::gamma::recip_gamma;
    let w = 1.0 - z;
    let d = class.exponent;
    let c = a + b + d;
    match class.regime {
        Regime::LogDivergent => {
            let offset = 2.0 * crate::gamma::digamma(1.0)?
                - crate::gamma::digamma(a)?
                - crate::gamma::digamma(b)?;
            Ok(-w.ln() + offset)
        }
        Regime::FiniteLimit => {
            if is_nonpositive_integer(-d, 1e-9) {
                return Ok(1.0);
            }
            // F = C_f + C_p w^d + ...; normalize by 1 + (C_p/C_f) w^d
            let c_p = gamma_fn(c)? * gamma_fn(-d)? * recip_gamma(a) * recip_gamma(b);
            Ok(1.0 + c_p / class.constant * w.powf(d))
        }
        Regime::PowerDivergent => {
            if is_nonpositive_integer(d, 1e-9) {
                return Ok(regime_normalizer(class, z));
            }
            // F = C_p w^d + C_f + ...; normalize by w^d + C_f/C_p
            let c_f = gamma_fn(c)? * gamma_fn(d)? * recip_gamma(c - a) * recip_gamma(c - b);
            Ok(w.powf(d) + c_f / class.constant)
        }
    }
}

/// Classifies the z -> 1 regime of F(a, b; c; z) and computes the
/// limiting constant. Requires c > 0; errors if the constant's gamma
/// arguments hit a pole.
pub fn limit_classify(a: f64, b: f64, c: f64) -> Result<LimitClass, SpecFunError> {
    if !(c > 0.0) {
        return Err(SpecFunError::Param {
            what: "limit classification requires c > 0",
            value: c,
        });
    }
    let d = c - a - b;
    if d.abs() <= REGIME_TIE_TOL {
        let constant = checked_ratio(&[a + b], &[a, b])?;
        return Ok(LimitClass {
            regime: Regime::LogDivergent,
            constant,
            exponent: d,
        });
    }
    if d > 0.0 {
        let constant = checked_ratio(&[c, d], &[c - a, c - b])?;
        Ok(LimitClass {
            regime: Regime::FiniteLimit,
            constant,
            exponent: d,
        })
    } else {
        let constant = checked_ratio(&[c, -d], &[a, b])?;
        Ok(LimitClass {
            regime: Regime::PowerDivergent,
            constant,
            exponent: d,
        })
    }
}

/// prod Gamma(num) / prod Gamma(den), erroring on any pole argument.
fn checked_ratio(num: &[f64], den: &[f64]) -> Result<f64, SpecFunError> {
    for &x in num.iter().chain(den) {
        if is_nonpositive_integer(x, 1e-12) {
            return Err(SpecFunError::GammaPole { x });
        }
    }
    let mut v = 1.0;
    for &x in num {
        v *= gamma_fn(x)?;
    }
    for &x in den {
        v /= gamma_fn(x)?;
    }
    Ok(v)
}
