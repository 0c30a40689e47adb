//! Certificate engine for the weighted-space uniqueness conditions:
//! classification of (alpha, beta, s, N, p), explicit supersolution
//! thresholds, and numerical verification of the strict inequalities
//! on radius/time grids.

pub mod constants;
pub mod density;
pub mod engine;
pub mod problem;

pub use constants::{regime_constant, regime_constant_via_limits};
pub use density::DensityModel;
pub use engine::{CertificateEngine, CertificateReport, EngineOptions, ResidualRow, Verdict};
pub use problem::{classify, growth_membership, CaseLabel, GrowthScan, ProblemKind, ProblemSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("parameter error: {what} (got {value})")]
    Param { what: &'static str, value: f64 },
    #[error("{what} (classification: {case})")]
    WrongCase { what: &'static str, case: CaseLabel },
    #[error("R_epsilon search failed below the cap {cap} (worst comparison margin {margin})")]
    REpsilonTooSmall { cap: f64, margin: f64 },
    #[error("numerical failure: {what}")]
    Numerical { what: &'static str },
    #[error(transparent)]
    FracLap(#[from] fraclap::FracLapError),
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
}
