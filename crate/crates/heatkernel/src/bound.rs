//! Two-sided bound diagnostics: the ratio of the kernel to the
//! comparison function min{ t^{-N/2s}, t / |x|^{N+2s} } over a grid.

use crate::profile::KernelProfile;
use crate::HeatKernelError;

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// max/min; the empirical square of the comparability constant.
    pub spread: f64,
    pub all_finite: bool,
    pub samples: usize,
}

/// Scans p(x,t) / min{t^{-N/2s}, t |x|^{-(N+2s)}} over the given grid.
pub fn bound_check(
    kp: &KernelProfile,
    xs: &[f64],
    ts: &[f64],
) -> Result<BoundReport, HeatKernelError> {
    let s = kp.order().s();
    let n = kp.order().dim() as f64;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    let mut all_finite = true;
    let mut samples = 0;
    for &t in ts {
        for &x in xs {
            let p = kp.kernel_eval(&[x], t)?;
            let branch_core = t.powf(-n / (2.0 * s));
            let branch_tail = if x == 0.0 {
                f64::INFINITY
            } else {
                t / x.abs().powf(n + 2.0 * s)
            };
            let comparison = branch_core.min(branch_tail);
            let ratio = p / comparison;
            if !ratio.is_finite() || ratio <= 0.0 {
                all_finite = false;
            }
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            samples += 1;
        }
    }
    Ok(BoundReport {
        ratio_min: lo,
        ratio_max: hi,
        spread: hi / lo,
        all_finite,
        samples,
    })
}
