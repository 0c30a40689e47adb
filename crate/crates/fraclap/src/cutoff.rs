//! The smooth radial cutoff family gamma_R(x) = gamma(|x|/R): identically
//! one inside R/2, identically zero outside R, with a C-infinity bridge.

use crate::field::{DecayClass, ScalarField, Smoothness};
use crate::pv::{flap_pv, PvOptions, PvResult};
use crate::{FracLapError, FracOrder};

#[derive(Debug, Clone, Copy)]
pub struct CutoffFamily {
    scale: f64,
}

impl CutoffFamily {
    pub fn new(scale: f64) -> Result<Self, FracLapError> {
        if !(scale > 0.0) {
            return Err(FracLapError::Param {
                what: "cutoff scale R must be positive",
                value: scale,
            });
        }
        Ok(Self { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The base profile gamma on [0, inf): 1 on [0, 1/2], 0 on [1, inf).
    pub fn base_profile(r: f64) -> f64 {
        if r <= 0.5 {
            1.0
        } else if r >= 1.0 {
            0.0
        } else {
            smooth_step(2.0 * r - 1.0)
        }
    }

    /// gamma_R at a point of any dimension.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Self::base_profile(r / self.scale)
    }

    pub fn as_field(&self) -> ScalarField {
        let scale = self.scale;
        ScalarField::new(
            move |x: &[f64]| {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                CutoffFamily::base_profile(r / scale)
            },
            DecayClass::CompactSupport { radius: self.scale },
            Smoothness::CInf,
        )
    }
}

/// C-infinity monotone bridge: 1 at t <= 0, 0 at t >= 1.
fn smooth_step(t: f64) -> f64 {
    let rise = bump(t);
    let fall = bump(1.0 - t);
    fall / (rise + fall)
}

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// (-Delta)^s gamma_R at a point.
pub fn cutoff_flap(
    cf: &CutoffFamily,
    x: &[f64],
    fo: FracOrder,
    opts: &PvOptions,
) -> Result<PvResult, FracLapError> {
    flap_pv(&cf.as_field(), x, fo, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fo1(s: f64) -> FracOrder {
        FracOrder::new(s, 1).unwrap()
    }

    #[test]
    fn profile_plateaus() {
        assert_eq!(CutoffFamily::base_profile(0.0), 1.0);
        assert_eq!(CutoffFamily::base_profile(0.5), 1.0);
        assert_eq!(CutoffFamily::base_profile(1.0), 0.0);
        assert_eq!(CutoffFamily::base_profile(3.0), 0.0);
        let g = CutoffFamily::new(8.0).unwrap();
        assert_eq!(g.eval(&[3.9]), 1.0);
        assert_eq!(g.eval(&[8.1]), 0.0);
        // monotone nonincreasing on the bridge
        let mut prev = 1.0;
        for i in 0..=100 {
            let r = 0.5 + 0.5 * i as f64 / 100.0;
            let v = CutoffFamily::base_profile(r);
            assert!(v <= prev + 1e-15 && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn scaling_identity() {
        // (-Delta)^s gamma_R (x) = R^{-2s} ((-Delta)^s gamma)(x/R)
        let opts = PvOptions {
            tol: 1e-11,
            ..Default::default()
        };
        let fo = fo1(0.5);
        let (r_scale, x) = (4.0, 2.0);
        let lhs = cutoff_flap(&CutoffFamily::new(r_scale).unwrap(), &[x], fo, &opts)
            .unwrap()
            .value;
        let rhs = r_scale.powf(-1.0)
            * cutoff_flap(&CutoffFamily::new(1.0).unwrap(), &[x / r_scale], fo, &opts)
                .unwrap()
                .value;
        assert!((lhs - rhs).abs() < 1e-8, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn sup_bound_uniform_in_scale() {
        // sup_x |(-Delta)^s gamma_R| <= C R^{-2s} with one C across scales
        let fo = fo1(0.5);
        let opts = PvOptions::default();
        let xs: Vec<f64> = (0..=24).map(|i| i as f64 / 12.0).collect(); // x/R in [0, 2]
        let mut scaled_sups = Vec::new();
        for r_scale in [2.0, 4.0, 8.0, 16.0] {
            let cf = CutoffFamily::new(r_scale).unwrap();
            let sup = xs
                .iter()
                .map(|t| {
                    cutoff_flap(&cf, &[t * r_scale], fo, &opts)
                        .unwrap()
                        .value
                        .abs()
                })
                .fold(0.0, f64::max);
            scaled_sups.push(sup * r_scale.powf(2.0 * fo.s()));
        }
        let (lo, hi) = scaled_sups
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        assert!(
            (hi - lo) / hi < 1e-6,
            "scaled sups not uniform: {scaled_sups:?}"
        );
    }

    #[test]
    fn far_field_decay_envelope() {
        // |(-Delta)^s gamma_R(x)| <= C R^{-2s} / (1 + (|x|/R)^{1+2s})
        let fo = fo1(0.75);
        let opts = PvOptions::default();
        let r_scale = 4.0;
        let cf = CutoffFamily::new(r_scale).unwrap();
        // calibrate C at the origin scale, then check far nodes
        let c0 = cutoff_flap(&cf, &[0.0], fo, &opts).unwrap().value.abs()
            * r_scale.powf(2.0 * fo.s())
            * 2.0
            + 2.0;
        for &x in &[6.0, 10.0, 20.0, 50.0] {
            let v = cutoff_flap(&cf, &[x], fo, &opts).unwrap().value.abs();
            let envelope =
                c0 * r_scale.powf(-2.0 * fo.s()) / (1.0 + (x / r_scale).powf(1.0 + 2.0 * fo.s()));
            assert!(v <= envelope, "x={x}: {v} above envelope {envelope}");
        }
    }
}
