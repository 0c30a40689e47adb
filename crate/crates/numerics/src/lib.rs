//! Shared numerical kernels used across the workspace: adaptive
//! Gauss-Kronrod quadrature, oscillatory panel integration with series
//! acceleration, monotone cubic interpolation, a Bessel `J0`, and small
//! fitting/summation helpers.

pub mod bessel;
pub mod fit;
pub mod interp;
pub mod oscillatory;
pub mod quad;

pub use bessel::bessel_j0;
pub use fit::{linear_fit, log_log_fit, LinearFit};
pub use interp::Pchip;
pub use oscillatory::integrate_alternating;
pub use quad::{integrate, integrate_with_breakpoints, QuadError, QuadResult};

/// Neumaier compensated summation; reproducible for a fixed input order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_cancels_rounding() {
        let xs: Vec<f64> = (0..100_000).map(|i| 0.1 + (i as f64) * 1e-12).collect();
        let naive: f64 = xs.iter().sum();
        let comp = compensated_sum(xs.iter().copied());
        let exact = 0.1 * 1e5 + 1e-12 * (99_999.0 * 100_000.0 / 2.0);
        assert!((comp - exact).abs() <= (naive - exact).abs());
        assert!((comp - exact).abs() / exact < 1e-14);
    }
}
