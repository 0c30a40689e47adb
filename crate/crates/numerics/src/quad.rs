//! Adaptive Gauss-Kronrod quadrature on finite intervals.
//!
//! The core rule is the classical 7-15 pair (QUADPACK's QK15). Adaptivity
//! is by greedy bisection of the panel with the largest error estimate;
//! the final value is accumulated in interval order with compensated
//! summation so results do not depend on the split schedule.

use std::collections::BinaryHeap;

use thiserror::Error;

use crate::compensated_sum;

/// Kronrod abscissae for the 7-15 pair (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// 7-point Gauss weights.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// 15-point Kronrod weights.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub evals: usize,
}

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("quadrature budget exceeded: partial value {partial}, error estimate {abs_err} above tolerance {tol}")]
    BudgetExceeded {
        partial: f64,
        abs_err: f64,
        tol: f64,
    },
    #[error("integrand returned a non-finite value near x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid integration interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
}

/// One application of the 7-15 Gauss-Kronrod pair on `[a, b]`.
///
/// Returns `(kronrod value, error estimate, integral of |f|)`. The error
/// estimate uses the QUADPACK rescaling of `|K15 - G7|`.
pub fn qk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];

    for j in 0..7 {
        let abscissa = half * XGK[j];
        let v1 = f(center - abscissa);
        let v2 = f(center + abscissa);
        fv1[j] = v1;
        fv2[j] = v2;
        let fsum = v1 + v2;
        if j % 2 != 0 {
            res_gauss += WG[j / 2] * fsum;
        }
        res_kronrod += WGK[j] * fsum;
        res_abs += WGK[j] * (v1.abs() + v2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err, res_abs)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.a == other.a
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap by error; ties broken by left endpoint for determinism
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// Stops when the summed error estimate is below
/// `max(abs_tol, rel_tol * |value|)` or errors out after `max_panels`
/// bisections.
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadResult, QuadError> {
    integrate_with_breakpoints(&mut f, &[a, b], abs_tol, rel_tol, max_panels)
}

/// Adaptive integral seeded with user breakpoints (useful when the
/// integrand has known corners or localized features).
pub fn integrate_with_breakpoints(
    f: &mut dyn FnMut(f64) -> f64,
    points: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadResult, QuadError> {
    if points.len() < 2 {
        return Err(QuadError::BadInterval {
            a: f64::NAN,
            b: f64::NAN,
        });
    }
    for w in points.windows(2) {
        if !(w[0] < w[1]) {
            return Err(QuadError::BadInterval { a: w[0], b: w[1] });
        }
    }

    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    for w in points.windows(2) {
        let (v, e, _) = qk15(f, w[0], w[1]);
        evals += 15;
        if !v.is_finite() {
            return Err(QuadError::NonFinite {
                x: 0.5 * (w[0] + w[1]),
            });
        }
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
        });
    }

    let mut panels = points.len() - 1;
    loop {
        let total: f64 = compensated_sum(heap.iter().map(|p| p.value));
        let total_err: f64 = heap.iter().map(|p| p.err).sum();
        let tol = abs_tol.max(rel_tol * total.abs());
        if total_err <= tol {
            let mut ordered: Vec<&Panel> = heap.iter().collect();
            ordered.sort_by(|p, q| p.a.total_cmp(&q.a));
            let value = compensated_sum(ordered.iter().map(|p| p.value));
            return Ok(QuadResult {
                value,
                abs_err: total_err,
                evals,
            });
        }
        if panels >= max_panels {
            return Err(QuadError::BudgetExceeded {
                partial: total,
                abs_err: total_err,
                tol,
            });
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; accept its estimate
            let mut spent = worst;
            spent.err = 0.0;
            heap.push(spent);
            continue;
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e, _) = qk15(f, lo, hi);
            evals += 15;
            if !v.is_finite() {
                return Err(QuadError::NonFinite { x: 0.5 * (lo + hi) });
            }
            heap.push(Panel {
                a: lo,
                b: hi,
                value: v,
                err: e,
            });
        }
        panels += 1;
    }
}
