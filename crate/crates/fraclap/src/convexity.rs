//! Numerical check of the convexity inequality
//! (-Delta)^s [G(u)] <= G'(u) (-Delta)^s u for the regularized power
//! G(r) = (r^2 + alpha)^{p/2}.

use crate::field::{DecayClass, ScalarField};
use crate::pv::{flap_pv, PvOptions};
use crate::{FracLapError, FracOrder};

#[derive(Debug, Clone, Copy)]
pub struct ConvexityRow {
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs - rhs; the inequality asks for this to be <= tolerance.
    pub slack: f64,
}

#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub rows: Vec<ConvexityRow>,
    pub max_slack: f64,
    /// Combined quadrature tolerance the slack should be compared with.
    pub tolerance: f64,
}

/// Evaluates both sides of the inequality at each point. G(u) keeps its
/// value G(0) = alpha^{p/2} at infinity, so the constant is subtracted
/// before the singular quadrature (constants are annihilated anyway).
pub fn convexity_check(
    u: &ScalarField,
    p_exp: f64,
    alpha_reg: f64,
    points: &[f64],
    fo: FracOrder,
    opts: &PvOptions,
) -> Result<ConvexityReport, FracLapError> {
    if !(p_exp >= 1.0) {
        return Err(FracLapError::Param {
            what: "convexity power p must be at least 1",
            value: p_exp,
        });
    }
    if !(alpha_reg > 0.0) {
        return Err(FracLapError::Param {
            what: "regularization alpha must be positive",
            value: alpha_reg,
        });
    }
    if fo.dim() != 1 {
        return Err(FracLapError::UnsupportedDimension { n: fo.dim() });
    }

    let g = move |r: f64| (r * r + alpha_reg).powf(p_exp / 2.0);
    let g_prime = move |r: f64| p_exp * r * (r * r + alpha_reg).powf(p_exp / 2.0 - 1.0);
    let g_at_zero = g(0.0);

    // decay of G(u) - G(0): Lipschitz image of u on the range of u
    let composed_decay = match u.decay() {
        DecayClass::CompactSupport { radius } => DecayClass::CompactSupport { radius },
        DecayClass::PowerDecay { exponent, scale } => {
            let lip = p_exp
                * scale
                * (scale * scale + alpha_reg)
                    .powf(p_exp / 2.0 - 1.0)
                    .max(alpha_reg.powf(p_exp / 2.0 - 1.0));
            DecayClass::PowerDecay {
                exponent,
                scale: lip * scale,
            }
        }
        DecayClass::Bounded { bound } => DecayClass::Bounded {
            bound: g(bound) - g_at_zero,
        },
    };
    let composed = {
        let smoothness = u.smoothness();
        let u = u.clone();
        ScalarField::new(
            move |x: &[f64]| g(u.eval(x)) - g_at_zero,
            composed_decay,
            smoothness,
        )
    };

    let mut rows = Vec::with_capacity(points.len());
    let mut max_slack = f64::NEG_INFINITY;
    let mut tol_acc = 0.0_f64;
    for &x in points {
        let lhs = flap_pv(&composed, &[x], fo, opts)?;
        let flap_u = flap_pv(u, &[x], fo, opts)?;
        let rhs = g_prime(u.eval(&[x])) * flap_u.value;
        let slack = lhs.value - rhs;
        tol_acc =
            tol_acc.max(lhs.err_estimate + flap_u.err_estimate.abs() * g_prime(u.eval(&[x])).abs());
        max_slack = max_slack.max(slack);
        rows.push(ConvexityRow {
            x,
            lhs: lhs.value,
            rhs,
            slack,
        });
    }
    Ok(ConvexityReport {
        rows,
        max_slack,
        tolerance: tol_acc.max(opts.tol),
    })
}
