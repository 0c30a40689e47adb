//! Evaluators for the fractional Laplacian (-Delta)^s on R^N and the
//! surrounding machinery: the principal-value singular integral, the
//! Fourier multiplier on periodic grids, the radial hypergeometric
//! closed form for power weights, the nonlocal bilinear form, smooth
//! cutoff families, and the convexity inequality check.
//!
//! All evaluators are pure; point-wise calls are independent and safe
//! to run concurrently.

pub mod constant;
pub mod convexity;
pub mod cutoff;
pub mod field;
pub mod pv;
pub mod radial;
pub mod spectral;

pub use constant::{normalization_constant, normalization_constant_integral};
pub use convexity::{convexity_check, ConvexityReport, ConvexityRow};
pub use cutoff::{cutoff_flap, CutoffFamily};
pub use field::{DecayClass, ScalarField, Smoothness};
pub use pv::{bilinear_form, flap_pv, PvOptions, PvResult};
pub use radial::{
    radial_shape, radial_supersolution_criterion, weight_eval, weight_first_derivative,
    weight_ode_lhs, weight_second_derivative, RadialClosedForm, SupersolutionWitness,
};
pub use spectral::{apply_multiplier, flap_spectral, heat_semigroup, Grid1};

use thiserror::Error;

/// Order s in (0, 1) of (-Delta)^s together with the spatial dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    s: f64,
    n: u32,
}

impl FracOrder {
    pub fn new(s: f64, n: u32) -> Result<Self, FracLapError> {
        if !(s > 0.0 && s < 1.0) {
            return Err(FracLapError::Param {
                what: "fractional order s must lie in (0, 1)",
                value: s,
            });
        }
        if n == 0 {
            return Err(FracLapError::Param {
                what: "spatial dimension must be at least 1",
                value: 0.0,
            });
        }
        Ok(Self { s, n })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> u32 {
        self.n
    }
}

#[derive(Debug, Error)]
pub enum FracLapError {
    #[error("parameter error: {what} (got {value})")]
    Param { what: &'static str, value: f64 },
    #[error("tail truncation error: decay class cannot certify the tail below {needed} (reached {achieved})")]
    TailTruncation { needed: f64, achieved: f64 },
    #[error("singularity error: field smoothness {grade:?} is below the C2 needed at the evaluation point")]
    Singularity { grade: field::Smoothness },
    #[error("dimension {n} is not supported by this evaluator")]
    UnsupportedDimension { n: u32 },
    #[error("calibration failed: {what} (worst relative residual {residual})")]
    Calibration { what: &'static str, residual: f64 },
    #[error("grid error: {what}")]
    Grid { what: &'static str },
    #[error(transparent)]
    Quad(#[from] numerics::QuadError),
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
}
