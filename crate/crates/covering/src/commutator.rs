//! The scaled commutator bound: whether
//! R^sigma [ phi |(-Delta)^s gamma_R| + |B(phi, gamma_R)| ] / (rho phi)
//! stays bounded uniformly over the cutoff scales, for the Riesz
//! potential phi and an admissible exponent sigma.

use serde::Serialize;

use certify::DensityModel;
use fraclap::{bilinear_form, cutoff_flap, CutoffFamily, FracOrder, PvOptions};

use crate::riesz::RieszPotential;
use crate::CoveringError;

/// Admissibility windows for sigma. The covering estimate needs
/// 0 < sigma < beta_aux - N + 2s - 2 alpha for an auxiliary exponent
/// beta_aux < N, and the cutoff estimate needs 0 < sigma < 2s - 2 alpha.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SigmaWindows {
    pub beta_aux: f64,
    pub covering_window: (f64, f64),
    pub cutoff_window: (f64, f64),
    pub admissible: bool,
    /// The stated hypothesis line: alpha < s and N > -2s + alpha.
    pub hypothesis_ok: bool,
    /// The condition the estimates actually use: N - 2s + 2 alpha > 0
    /// guarantees an auxiliary exponent below N exists.
    pub body_ok: bool,
    /// Flag raised when the two conditions disagree for these parameters.
    pub conditions_disagree: bool,
}

/// Computes the windows; `beta_aux` defaults to the midpoint of
/// (max(N - 2s + 2 alpha, 0), N).
pub fn sigma_windows(
    density: &DensityModel,
    fo: FracOrder,
    sigma: f64,
    beta_aux: Option<f64>,
) -> SigmaWindows {
    let n = fo.dim() as f64;
    let s = fo.s();
    let alpha = density.alpha();
    let lower = (n - 2.0 * s + 2.0 * alpha).max(0.0);
    let beta_aux = beta_aux.unwrap_or(0.5 * (lower + n));
    let covering_window = (0.0, beta_aux - n + 2.0 * s - 2.0 * alpha);
    let cutoff_window = (0.0, 2.0 * s - 2.0 * alpha);
    let admissible = beta_aux > 0.0
        && beta_aux < n
        && sigma > 0.0
        && sigma < covering_window.1
        && sigma < cutoff_window.1;
    let hypothesis_ok = alpha < s && n > -2.0 * s + alpha;
    let body_ok = n - 2.0 * s + 2.0 * alpha > 0.0;
    SigmaWindows {
        beta_aux,
        covering_window,
        cutoff_window,
        admissible,
        hypothesis_ok,
        body_ok,
        conditions_disagree: hypothesis_ok != body_ok,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaledRatioScan {
    pub sigma: f64,
    pub windows: SigmaWindows,
    /// (R, sup over the x-grid of the scaled ratio).
    pub sups: Vec<(f64, f64)>,
    /// max/min of the sups across scales.
    pub spread: f64,
    /// sup over the scan of R^sigma |(-Delta)^s gamma_R(x)|
    /// (1 + |x|^{2s - sigma}): the cutoff far-field envelope constant.
    pub cutoff_envelope_constant: f64,
}

pub fn scaled_ratio_check(
    phi: &RieszPotential,
    density: &DensityModel,
    r_list: &[f64],
    sigma: f64,
    beta_aux: Option<f64>,
    pv: &PvOptions,
) -> Result<ScaledRatioScan, CoveringError> {
    let fo = phi.order();
    let s = fo.s();
    let windows = sigma_windows(density, fo, sigma, beta_aux);
    if !windows.admissible {
        return Err(CoveringError::Param {
            what: "no admissible sigma for these (alpha, beta, s) parameters",
        });
    }
    let field = phi.as_field();

    let mut sups = Vec::with_capacity(r_list.len());
    let mut envelope_constant = 0.0_f64;
    for &r_scale in r_list {
        let cf = CutoffFamily::new(r_scale)?;
        let mut sup = 0.0_f64;
        // log-spaced probe radii across and beyond the cutoff support
        let mut xs = vec![0.0];
        for i in 0..32 {
            xs.push(0.05 * (8.0 * r_scale / 0.05).powf(i as f64 / 31.0));
        }
        for &x in &xs {
            let phix = phi.eval(x);
            let rho = density.rho(x, s);
            let flap = cutoff_flap(&cf, &[x], fo, pv)?.value.abs();
            let bil = bilinear_form(&field, &cf.as_field(), &[x], fo, pv)?
                .value
                .abs();
            let ratio = r_scale.powf(sigma) * (phix * flap + bil) / (rho * phix);
            sup = sup.max(ratio);
            envelope_constant = envelope_constant
                .max(r_scale.powf(sigma) * flap * (1.0 + x.abs().powf(2.0 * s - sigma)));
        }
        sups.push((r_scale, sup));
    }
    let (lo, hi) = sups
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &(_, v)| {
            (lo.min(v), hi.max(v))
        });
    Ok(ScaledRatioScan {
        sigma,
        windows,
        sups,
        spread: hi / lo,
        cutoff_envelope_constant: envelope_constant,
    })
}
