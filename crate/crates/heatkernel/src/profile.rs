//! The kernel profile P(x) = int e^{i x.xi - |xi|^{2s}} d xi and its
//! self-similar rescaling p(x, t) = t^{-N/2s} P(x / t^{1/2s}).
//!
//! The profile is computed by radial reduction to a one-dimensional
//! integral (cosine weight in dimension one, Bessel J0 weight in
//! dimension two), with the substitution xi = v^2 removing the envelope
//! kink at the origin for s < 1/2, and the oscillatory part summed with
//! epsilon acceleration. Values are tabulated on a log-radius grid with
//! monotone cubic interpolation; beyond the table edge a three-term
//! power model with exponents N+2s, N+4s, N+6s is fitted.

use std::f64::consts::PI;

use numerics::{bessel_j0, integrate_alternating, integrate_with_breakpoints, Pchip};

use crate::HeatKernelError;
use fraclap::FracOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// The bare Fourier integral; total mass (2 pi)^N.
    FourierRaw,
    /// Divided by (2 pi)^N; the transition density with unit mass.
    UnitMass,
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    pub r_max: f64,
    pub nodes: usize,
    /// Absolute tolerance for each tabulated oscillatory integral.
    pub tol: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            r_max: 200.0,
            nodes: 2000,
            tol: 1e-11,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KernelProfile {
    fo: FracOrder,
    normalization: Normalization,
    /// P at the origin (raw), in closed gamma form.
    p0: f64,
    r_min: f64,
    r_max: f64,
    p_at_rmin: f64,
    table: Pchip, // ln r -> raw profile value
    /// Coefficients of A r^{-(N+2s)} + B r^{-(N+4s)} + C r^{-(N+6s)}.
    tail: [f64; 3],
}

impl KernelProfile {
    pub fn build(
        fo: FracOrder,
        normalization: Normalization,
        opts: &ProfileOptions,
    ) -> Result<Self, HeatKernelError> {
        if fo.dim() > 2 {
            return Err(HeatKernelError::UnsupportedDimension { n: fo.dim() });
        }
        let s = fo.s();
        let n = fo.dim() as f64;

        let p0 = match fo.dim() {
            1 => 2.0 * gamma(1.0 + 1.0 / (2.0 * s)),
            _ => PI * gamma(1.0 / s) / s,
        };

        let r_min = 1e-4_f64;
        let mut ts = Vec::with_capacity(opts.nodes);
        let mut vals = Vec::with_capacity(opts.nodes);
        let (t_lo, t_hi) = (r_min.ln(), opts.r_max.ln());
        for i in 0..opts.nodes {
            let t = t_lo + (t_hi - t_lo) * i as f64 / (opts.nodes - 1) as f64;
            let r = t.exp();
            let v = raw_profile_integral(fo, r, opts.tol)?;
            ts.push(t);
            vals.push(v);
        }
        let p_at_rmin = vals[0];
        let table =
            Pchip::new(ts, vals.clone()).map_err(|what| HeatKernelError::Profile { what })?;

        // three-point collocation of the power tail in u = r^{-2s}
        let fit_radii = [opts.r_max / 4.0, opts.r_max / 2.0, opts.r_max];
        let mut us = [0.0; 3];
        let mut ys = [0.0; 3];
        for (i, &r) in fit_radii.iter().enumerate() {
            us[i] = r.powf(-2.0 * s);
            let v = raw_profile_integral(fo, r, opts.tol)?;
            ys[i] = v * r.powf(n + 2.0 * s); // = A + B u + C u^2
        }
        let tail = quadratic_through(us, ys);

        Ok(Self {
            fo,
            normalization,
            p0,
            r_min,
            r_max: opts.r_max,
            p_at_rmin,
            table,
            tail,
        })
    }

    pub fn order(&self) -> FracOrder {
        self.fo
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    fn norm_factor(&self) -> f64 {
        match self.normalization {
            Normalization::FourierRaw => 1.0,
            Normalization::UnitMass => (2.0 * PI).powi(-(self.fo.dim() as i32)),
        }
    }

    /// Raw (unnormalized) profile value at radius r.
    pub fn profile_raw(&self, r: f64) -> f64 {
        let r = r.abs();
        if r <= self.r_min {
            // even quadratic blend through P(0) and P(r_min)
            let q = (r / self.r_min).powi(2);
            return self.p0 + (self.p_at_rmin - self.p0) * q;
        }
        if r <= self.r_max {
            return self.table.eval(r.ln());
        }
        self.tail_model(r)
    }

    fn tail_model(&self, r: f64) -> f64 {
        let s = self.fo.s();
        let n = self.fo.dim() as f64;
        let u = r.powf(-2.0 * s);
        (self.tail[0] + self.tail[1] * u + self.tail[2] * u * u) * r.powf(-(n + 2.0 * s))
    }

    /// Leading tail coefficient fitted at the table edge (raw scale).
    pub fn tail_leading_coefficient(&self) -> f64 {
        self.tail[0]
    }

    /// P at a point, including normalization.
    pub fn profile_eval(&self, x: &[f64]) -> f64 {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.norm_factor() * self.profile_raw(r)
    }

    /// p(x, t) = t^{-N/2s} P(x / t^{1/2s}), normalized per construction.
    pub fn kernel_eval(&self, x: &[f64], t: f64) -> Result<f64, HeatKernelError> {
        if !(t > 0.0) {
            return Err(HeatKernelError::Param {
                what: "kernel time must be positive",
                value: t,
            });
        }
        let s = self.fo.s();
        let n = self.fo.dim() as f64;
        let scale = t.powf(1.0 / (2.0 * s));
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt() / scale;
        Ok(t.powf(-n / (2.0 * s)) * self.norm_factor() * self.profile_raw(r))
    }

    /// Mass of the kernel over all of R^N (any t; the scaling is mass
    /// preserving, so this integrates the profile). Tabulated part by
    /// adaptive quadrature, tail part from the fitted power model.
    pub fn kernel_mass(&self) -> Result<f64, HeatKernelError> {
        let n = self.fo.dim();
        let s = self.fo.s();
        let nf = n as f64;
        let radial_weight = |r: f64| match n {
            1 => 2.0,
            _ => 2.0 * PI * r,
        };
        let mut integral = integrate_with_breakpoints(
            &mut |r: f64| self.profile_raw(r) * radial_weight(r),
            &[0.0, self.r_min, 1.0, 10.0, self.r_max / 2.0, self.r_max],
            1e-12,
            1e-11,
            20_000,
        )
        .map_err(|_| HeatKernelError::Profile {
            what: "profile mass quadrature failed",
        })?
        .value;
        // analytic tail of the power model against the radial weight
        let angular = if n == 1 { 2.0 } else { 2.0 * PI };
        let dim_shift = if n == 1 { 0.0 } else { 1.0 };
        for (k, coef) in self.tail.iter().enumerate() {
            // term: coef * r^{-(N + 2s + 2ks)} * angular * r^{dim_shift}
            let p = nf + 2.0 * s + 2.0 * k as f64 * s - dim_shift;
            integral += angular * coef * self.r_max.powf(1.0 - p) / (p - 1.0);
        }
        Ok(self.norm_factor() * integral)
    }

    /// Kernel mass lying outside |x| > radius at time t.
    pub fn tail_mass_beyond(&self, radius: f64, t: f64) -> f64 {
        let s = self.fo.s();
        let n = self.fo.dim();
        let nf = n as f64;
        let r_scaled = radius / t.powf(1.0 / (2.0 * s));
        let angular = if n == 1 { 2.0 } else { 2.0 * PI };
        let dim_shift = if n == 1 { 0.0 } else { 1.0 };
        if r_scaled >= self.r_max {
            let mut m = 0.0;
            for (k, coef) in self.tail.iter().enumerate() {
                let p = nf + 2.0 * s + 2.0 * k as f64 * s - dim_shift;
                m += angular * coef * r_scaled.powf(1.0 - p) / (p - 1.0);
            }
            return self.norm_factor() * m;
        }
        let radial_weight = |r: f64| match n {
            1 => 2.0,
            _ => 2.0 * PI * r,
        };
        let mid = integrate_with_breakpoints(
            &mut |r: f64| self.profile_raw(r) * radial_weight(r),
            &[r_scaled, self.r_max],
            1e-12,
            1e-10,
            20_000,
        )
        .map(|q| q.value)
        .unwrap_or(0.0);
        let mut tail = 0.0;
        for (k, coef) in self.tail.iter().enumerate() {
            let p = nf + 2.0 * s + 2.0 * k as f64 * s - dim_shift;
            tail += angular * coef * self.r_max.powf(1.0 - p) / (p - 1.0);
        }
        self.norm_factor() * (mid + tail)
    }
}

/// The radial profile integral at one radius.
fn raw_profile_integral(fo: FracOrder, r: f64, tol: f64) -> Result<f64, HeatKernelError> {
    let s = fo.s();
    let four_s = 4.0 * s;
    // envelope support in the substituted variable xi = v^2:
    // e^{-v^{4s}} < 1e-17 once v^{4s} > 39
    let v_cap: f64 = 39f64.powf(1.0 / four_s);
    let fail = |_e| HeatKernelError::Profile {
        what: "profile oscillatory integral did not converge",
    };
    match fo.dim() {
        1 => {
            // P(r) = 2 int_0^inf e^{-xi^{2s}} cos(r xi) d xi
            //      = 4 int_0^inf v e^{-v^{4s}} cos(r v^2) dv
            let f = move |v: f64| 4.0 * v * (-v.powf(four_s)).exp() * (r * v * v).cos();
            if r < 0.05 {
                let q = integrate_with_breakpoints(
                    &mut { f },
                    &small_radius_breaks(v_cap),
                    tol,
                    1e-13,
                    20_000,
                )
                .map_err(|_| HeatKernelError::Profile {
                    what: "profile small-radius quadrature failed",
                })?;
                Ok(q.value)
            } else {
                let breaks = move |k: usize| ((k as f64 + 1.5) * PI / r).sqrt();
                integrate_alternating(f, 0.0, breaks, tol, 100_000).map_err(fail)
            }
        }
        2 => {
            // P(r) = 2 pi int_0^inf e^{-xi^{2s}} J0(r xi) xi d xi
            //      = 4 pi int_0^inf v^3 e^{-v^{4s}} J0(r v^2) dv
            let f =
                move |v: f64| 4.0 * PI * v * v * v * (-v.powf(four_s)).exp() * bessel_j0(r * v * v);
            if r < 0.05 {
                let q = integrate_with_breakpoints(
                    &mut { f },
                    &small_radius_breaks(v_cap),
                    tol,
                    1e-13,
                    20_000,
                )
                .map_err(|_| HeatKernelError::Profile {
                    what: "profile small-radius quadrature failed",
                })?;
                Ok(q.value)
            } else {
                // J0 zeros are asymptotically at (k + 3/4) pi
                let breaks = move |k: usize| ((k as f64 + 1.75) * PI / r).sqrt();
                integrate_alternating(f, 0.0, breaks, tol, 100_000).map_err(fail)
            }
        }
        n => Err(HeatKernelError::UnsupportedDimension { n }),
    }
}

fn small_radius_breaks(v_cap: f64) -> Vec<f64> {
    let mut bks = vec![0.0];
    for candidate in [1.0, v_cap * 0.5] {
        if candidate > 1e-12 && candidate < v_cap * (1.0 - 1e-9) {
            bks.push(candidate);
        }
    }
    bks.push(v_cap);
    bks.sort_by(f64::total_cmp);
    bks.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * v_cap);
    bks
}

/// Quadratic through three (u, y) points, returned as coefficients of
/// 1, u, u^2 (Lagrange form expanded).
fn quadratic_through(u: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    let mut coeffs = [0.0; 3];
    for i in 0..3 {
        let (a, b) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let denom = (u[i] - u[a]) * (u[i] - u[b]);
        let scale = y[i] / denom;
        // (u - u_a)(u - u_b) = u^2 - (u_a + u_b) u + u_a u_b
        coeffs[0] += scale * u[a] * u[b];
        coeffs[1] -= scale * (u[a] + u[b]);
        coeffs[2] += scale;
    }
    coeffs
}

fn gamma(x: f64) -> f64 {
    // arguments here are strictly positive
    specfun::gamma_fn(x).expect("positive gamma argument")
}
