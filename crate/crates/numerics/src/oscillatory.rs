//! Semi-infinite oscillatory integrals by panel summation between sign
//! changes, with Wynn epsilon acceleration of the alternating partial sums.
//!
//! The caller supplies the panel breakpoints (typically the zeros of the
//! oscillating factor). Once the panel sequence settles into slowly
//! decaying alternation, the epsilon algorithm converges far faster than
//! direct summation, which matters for heavy-tailed envelopes.

use thiserror::Error;

use crate::quad::{integrate, QuadError};

#[derive(Debug, Error)]
pub enum OscError {
    #[error("oscillatory sum did not stabilize within {panels} panels (last estimate {estimate}, spread {spread})")]
    NotConverged {
        panels: usize,
        estimate: f64,
        spread: f64,
    },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
///
/// The estimates live in the even columns of the epsilon table. Deeper
/// columns are usually better, but a near-zero difference anywhere in
/// the table injects a huge spurious entry that can persist for many
/// rows, so instead of blindly taking the deepest column this returns
/// the even-column entry with the best internal agreement (consecutive
/// entries of a column agreeing is the practical convergence signal).
pub fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    if n < 3 {
        return *partial_sums.last().unwrap_or(&0.0);
    }
    let mut prev: Vec<f64> = vec![0.0; n + 1]; // epsilon_{-1} column
    let mut cur: Vec<f64> = partial_sums.to_vec(); // epsilon_0 column
    let mut best = cur[n - 1];
    let mut best_score = (cur[n - 1] - cur[n - 2]).abs();
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                // column converged exactly
                return cur[i + 1];
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        prev = cur;
        cur = next;
        if (n - cur.len()).is_multiple_of(2) {
            let m = cur.len();
            let candidate = cur[m - 1];
            if candidate.is_finite() {
                let score = if m >= 2 {
                    (cur[m - 1] - cur[m - 2]).abs()
                } else {
                    (candidate - best).abs()
                };
                if score < best_score {
                    best_score = score;
                    best = candidate;
                }
            }
        }
    }
    best
}

/// Integrates `f` over `[breaks[0], inf)` given ordered breakpoints at
/// which the integrand changes sign (or at least alternates in panel
/// mass). `next_break` extends the breakpoint sequence indefinitely.
///
/// Convergence is declared when either the raw panel magnitude falls
/// below `tol` (fast-decay regime) or the accelerated estimate moves by
/// less than `tol` over three consecutive panels.
pub fn integrate_alternating(
    mut f: impl FnMut(f64) -> f64,
    start: f64,
    mut next_break: impl FnMut(usize) -> f64,
    tol: f64,
    max_panels: usize,
) -> Result<f64, OscError> {
    let mut partial = Vec::with_capacity(64);
    let mut sum = 0.0;
    let mut lo = start;
    let mut prev_accel = f64::NAN;
    let mut stable = 0usize;

    for k in 0..max_panels {
        let hi = next_break(k);
        if !(hi > lo) {
            continue;
        }
        // a panel stuck at its rounding floor but already far below the
        // overall tolerance is accepted with its partial value
        let panel_value = match integrate(&mut f, lo, hi, tol * 1e-2, 1e-12, 200) {
            Ok(q) => q.value,
            Err(QuadError::BudgetExceeded {
                partial: stalled,
                abs_err,
                ..
            }) if abs_err <= tol * 0.1 => stalled,
            Err(e) => return Err(e.into()),
        };
        sum += panel_value;
        partial.push(sum);
        lo = hi;

        if panel_value.abs() < tol && k >= 2 {
            // direct summation already below tolerance
            let accel = wynn_epsilon(&partial);
            let pick = if (accel - sum).abs() < 10.0 * tol {
                accel
            } else {
                sum
            };
            return Ok(pick);
        }
        if partial.len() >= 6 {
            let accel = wynn_epsilon(&partial);
            // for an (eventually) alternating series the limit lies
            // inside the envelope of recent partial sums; estimates
            // escaping it are table artifacts, not convergence
            let recent = &partial[partial.len().saturating_sub(10)..];
            let env_lo = recent.iter().cloned().fold(f64::INFINITY, f64::min);
            let env_hi = recent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let margin = panel_value.abs() + tol;
            let inside = accel >= env_lo - margin && accel <= env_hi + margin;
            if inside && (accel - prev_accel).abs() < tol {
                stable += 1;
                if stable >= 3 {
                    return Ok(accel);
                }
            } else {
                stable = 0;
            }
            prev_accel = accel;
        }
    }
    Err(OscError::NotConverged {
        panels: max_panels,
        estimate: wynn_epsilon(&partial),
        spread: (wynn_epsilon(&partial) - sum).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wynn_accelerates_leibniz() {
        // pi/4 = 1 - 1/3 + 1/5 - ...
        let mut s = 0.0;
        let sums: Vec<f64> = (0..20)
            .map(|k| {
                s += if k % 2 == 0 { 1.0 } else { -1.0 } / (2 * k + 1) as f64;
                s
            })
            .collect();
        let direct_err = (sums[19] - PI / 4.0).abs();
        let accel_err = (wynn_epsilon(&sums) - PI / 4.0).abs();
        assert!(accel_err < 1e-12, "accel err {accel_err}");
        assert!(accel_err < direct_err * 1e-8);
    }

    #[test]
    fn damped_cosine_integral() {
        // int_0^inf e^{-t} cos(5 t) dt = 1 / (1 + 25)
        let breaks = |k: usize| (0.5 + k as f64) * PI / 5.0;
        let v = integrate_alternating(
            |t: f64| (-t).exp() * (5.0 * t).cos(),
            0.0,
            breaks,
            1e-13,
            500,
        )
        .unwrap();
        assert!((v - 1.0 / 26.0).abs() < 1e-11, "value {v}");
    }

    #[test]
    fn heavy_tail_oscillation_needs_acceleration() {
        // int_0^inf cos(3 t) / (1 + t) dt, reference frozen from a
        // 30-digit quadosc computation
        let x = 3.0;
        let reference = 0.079221521164364044;
        let breaks = |k: usize| (0.5 + k as f64) * PI / x;
        let v = integrate_alternating(|t: f64| (x * t).cos() / (1.0 + t), 0.0, breaks, 1e-11, 400)
            .unwrap();
        assert!((v - reference).abs() < 1e-8, "value {v}");
    }
}
