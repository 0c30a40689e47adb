//! Fractional heat kernel: profile evaluation, self-similar scaling,
//! two-sided bound diagnostics, and the convolution representation of
//! solutions. A profile is built once per (order, normalization) and is
//! immutable afterwards, so it can be shared freely across threads.

pub mod bound;
pub mod conv;
pub mod profile;

pub use bound::{bound_check, BoundReport};
pub use conv::{convolution_solution, convolve_at, ConvOptions};
pub use profile::{KernelProfile, Normalization, ProfileOptions};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HeatKernelError {
    #[error("parameter error: {what} (got {value})")]
    Param { what: &'static str, value: f64 },
    #[error("dimension {n} is not supported by the kernel profile")]
    UnsupportedDimension { n: u32 },
    #[error("profile construction failed: {what}")]
    Profile { what: &'static str },
    #[error("box too small: kernel tail mass {tail_mass} outside the box exceeds {limit}")]
    BoxTooSmall { tail_mass: f64, limit: f64 },
}
