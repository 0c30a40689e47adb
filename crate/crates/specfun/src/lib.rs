//! Gamma function and real-axis Gauss hypergeometric machinery.
//!
//! All operations are pure functions of their arguments and are safe to
//! call concurrently.

pub mod gamma;
pub mod hyp2f1;
pub mod limits;

pub use gamma::{digamma, gamma_fn, is_nonpositive_integer, recip_gamma};
pub use hyp2f1::{hyp2f1, pfaff_transform, HypParams, PfaffTransformed};
pub use limits::{
    limit_classify, regime_normalizer, regime_normalizer_corrected, LimitClass, Regime,
    REGIME_TIE_TOL,
};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SpecFunError {
    #[error("gamma pole at nonpositive integer x = {x}")]
    GammaPole { x: f64 },
    #[error("parameter error: {what} (got {value})")]
    Param { what: &'static str, value: f64 },
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },
    #[error("non-convergence: {what}")]
    NonConvergence { what: &'static str },
}
