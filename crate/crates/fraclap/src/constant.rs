//! The normalization constant of the principal-value form of
//! (-Delta)^s, in closed form and through its defining cosine integral.

use std::f64::consts::PI;

use numerics::{bessel_j0, integrate_alternating, integrate_with_breakpoints};
use specfun::gamma_fn;

use crate::{FracLapError, FracOrder};

/// C_{N,s} = 2^{2s-1} * 2s * Gamma((N+2s)/2) / (pi^{N/2} Gamma(1-s)).
pub fn normalization_constant(fo: FracOrder) -> f64 {
    let s = fo.s();
    let n = fo.dim() as f64;
    let num =
        2f64.powf(2.0 * s - 1.0) * 2.0 * s * gamma_fn((n + 2.0 * s) / 2.0).expect("argument > 0");
    let den = PI.powf(n / 2.0) * gamma_fn(1.0 - s).expect("argument in (0,1)");
    num / den
}

/// Cross-check: C_{N,s} = ( integral over R^N of (1 - cos xi_1) / |xi|^{N+2s} )^{-1}.
///
/// Reduced to one radial integral: in dimension 1 the integrand is
/// 2 (1 - cos t) t^{-1-2s}; in dimension 2 the angular average of
/// cos(t cos theta) is J0(t), giving 2 pi (1 - J0(t)) t^{-1-2s}.
/// Dimensions above 2 are not needed at desk scale.
pub fn normalization_constant_integral(fo: FracOrder, tol: f64) -> Result<f64, FracLapError> {
    let s = fo.s();
    let two_s = 2.0 * s;
    let integral = match fo.dim() {
        1 => cosine_integral(|t| 2.0 * (1.0 - t.cos()), 2.0, two_s, tol)?,
        2 => cosine_integral(|t| 2.0 * PI * (1.0 - bessel_j0(t)), 2.0 * PI, two_s, tol)?,
        n => return Err(FracLapError::UnsupportedDimension { n }),
    };
    Ok(1.0 / integral)
}

/// integral_0^inf g(t) t^{-1-2s} dt for g(t) ~ c t^2 near zero and
/// g - g_mean oscillatory decaying; the mean part of the tail is summed
/// exactly and the oscillatory remainder integrated panel by panel.
fn cosine_integral(
    g: impl Fn(f64) -> f64,
    g_mean: f64,
    two_s: f64,
    tol: f64,
) -> Result<f64, FracLapError> {
    // near zero, g(t) t^{-1-2s} ~ c t^{1-2s}: integrable; substitute
    // t = e^v to remove the endpoint entirely, with a quadratic model
    // below t_eps where 1-cos(t) loses digits to cancellation
    let t_eps = 1e-4;
    let g_eps = g(t_eps);
    let floor = g_eps * t_eps.powf(-two_s) / (2.0 - two_s);

    let mid = integrate_with_breakpoints(
        &mut |v: f64| {
            let t = v.exp();
            g(t) * t.powf(-two_s)
        },
        &[t_eps.ln(), 0.0, PI.ln(), (16.0 * PI).ln()],
        tol * 0.1,
        1e-13,
        4000,
    )?;

    // beyond the edge the mean part of g integrates exactly; the
    // oscillatory remainder alternates over half-period panels and is
    // summed with epsilon acceleration (its decay is only algebraic)
    let t_edge = 16.0 * PI;
    let mean_tail = g_mean * t_edge.powf(-two_s) / two_s;
    let osc_tail = integrate_alternating(
        |t: f64| (g(t) - g_mean) * t.powf(-1.0 - two_s),
        t_edge,
        |k| t_edge + (k + 1) as f64 * PI,
        tol * 0.1,
        4000,
    )
    .map_err(|_| FracLapError::TailTruncation {
        needed: tol,
        achieved: f64::NAN,
    })?;
    Ok(floor + mid.value + mean_tail + osc_tail)
}
