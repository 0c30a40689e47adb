//! Covering decomposition of the product space, remainder-integral
//! scans with decay-rate fits, the Riesz-potential construction, and
//! the scaled commutator bound check.

pub mod commutator;
pub mod regions;
pub mod remainder;
pub mod riesz;

pub use commutator::{scaled_ratio_check, sigma_windows, ScaledRatioScan, SigmaWindows};
pub use regions::{region_contains_radii, region_membership, Region};
pub use remainder::{remainder_integral, remainder_monte_carlo, RemainderOptions, RemainderScan};
pub use riesz::{
    riesz_constant_classical, riesz_potential, RieszOptions, RieszPotential, RieszReport,
};

use thiserror::Error;

/// Least-squares decay exponent of a positive scan, as the slope of
/// log values against log scales.
pub fn decay_rate_fit(values: &[(f64, f64)]) -> Result<numerics::LinearFit, CoveringError> {
    if values.len() < 4 {
        return Err(CoveringError::Param {
            what: "decay fits need at least four scales",
        });
    }
    numerics::log_log_fit(values).ok_or(CoveringError::Numerical {
        what: "degenerate decay fit (nonpositive values)",
    })
}

#[derive(Debug, Error)]
pub enum CoveringError {
    #[error("parameter error: {what}")]
    Param { what: &'static str },
    #[error("dimension error: {what}")]
    Dimension { what: &'static str },
    #[error("numerical failure: {what}")]
    Numerical { what: &'static str },
    #[error(transparent)]
    FracLap(#[from] fraclap::FracLapError),
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
}
