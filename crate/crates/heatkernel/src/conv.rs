//! Convolution representation u(x, t) = int p(x - y, t) u0(y) dy on a
//! grid, by exact linear (non-cyclic) discrete convolution.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use fraclap::Grid1;

use crate::profile::{KernelProfile, Normalization};
use crate::HeatKernelError;

#[derive(Debug, Clone, Copy)]
pub struct ConvOptions {
    /// Kernel mass allowed to lie outside the box before erroring.
    pub tail_mass_limit: f64,
}

impl Default for ConvOptions {
    fn default() -> Self {
        Self {
            tail_mass_limit: 1e-6,
        }
    }
}

/// Discrete convolution of `u0` with the kernel at time `t` over the
/// full grid. The sum runs over the entire box, which contains all of
/// supp u0 by precondition, so the quadrature of the representation
/// integral is complete; the tail-mass check guards the downstream
/// claims (mass accounting, semigroup composition) that do depend on
/// the kernel mass staying inside the box.
pub fn convolution_solution(
    u0: &Grid1,
    t: f64,
    kp: &KernelProfile,
    opts: &ConvOptions,
) -> Result<Grid1, HeatKernelError> {
    if kp.normalization() != Normalization::UnitMass {
        return Err(HeatKernelError::Param {
            what: "convolution requires the unit-mass normalization",
            value: 0.0,
        });
    }
    if kp.order().dim() != 1 {
        return Err(HeatKernelError::UnsupportedDimension {
            n: kp.order().dim(),
        });
    }
    let outside = kp.tail_mass_beyond(u0.half_width(), t);
    if outside > opts.tail_mass_limit {
        return Err(HeatKernelError::BoxTooSmall {
            tail_mass: outside,
            limit: opts.tail_mass_limit,
        });
    }

    let m = u0.len();
    let dx = u0.dx();
    let p = 2 * m;

    // kernel sampled on signed offsets k in (-m, m], stored cyclically
    let mut kern: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); p];
    for (k, slot) in kern.iter_mut().enumerate() {
        let signed = if k <= m {
            k as f64
        } else {
            k as f64 - p as f64
        };
        let v = kp.kernel_eval(&[signed * dx], t)? * dx;
        *slot = Complex::new(v, 0.0);
    }
    let mut field: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); p];
    for (slot, &v) in field.iter_mut().zip(u0.values()) {
        *slot = Complex::new(v, 0.0);
    }

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(p);
    fwd.process(&mut kern);
    fwd.process(&mut field);
    for (f, k) in field.iter_mut().zip(&kern) {
        *f *= k;
    }
    planner.plan_fft_inverse(p).process(&mut field);

    let mut out = Grid1::new(u0.half_width(), m).map_err(|_| HeatKernelError::Profile {
        what: "output grid construction failed",
    })?;
    let scale = 1.0 / p as f64;
    for (slot, v) in out.values_mut().iter_mut().zip(&field) {
        *slot = v.re * scale;
    }
    Ok(out)
}

/// Pointwise convolution at selected points, summing directly over the
/// support of `u0`. Useful when the kernel is much narrower than the
/// grid spacing budget allows on the full box (small times).
pub fn convolve_at(
    u0_support: &Grid1,
    t: f64,
    kp: &KernelProfile,
    points: &[f64],
) -> Result<Vec<f64>, HeatKernelError> {
    let dx = u0_support.dx();
    let mut out = Vec::with_capacity(points.len());
    for &x in points {
        let mut acc = 0.0;
        for j in 0..u0_support.len() {
            let w = u0_support.values()[j];
            if w != 0.0 {
                acc += kp.kernel_eval(&[x - u0_support.x(j)], t)? * w;
            }
        }
        out.push(acc * dx);
    }
    Ok(out)
}
