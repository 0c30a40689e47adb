//! The variable-density model: a certified pointwise lower bound of the
//! form K (1 + |x|^2)^{-alpha/2}, optionally with the logarithmic
//! enhancement K (1 + |x|^2)^{-s} log(1 + |x|^2).
//!
//! `alpha` is the spatial decay rate: the bound behaves like K |x|^{-alpha}
//! at infinity. The logarithmically corrected variant is the borderline
//! alpha = 2s density of the weight-exponent-equals-dimension case.

use serde::Serialize;

use crate::CertifyError;

#[derive(Debug, Clone, Serialize)]
pub struct DensityModel {
    k: f64,
    alpha: f64,
    log_correction: bool,
}

impl DensityModel {
    /// rho(x) >= K (1 + |x|^2)^{-alpha/2}.
    pub fn power_law(k: f64, alpha: f64) -> Result<Self, CertifyError> {
        if !(k > 0.0) {
            return Err(CertifyError::Param {
                what: "density constant K must be positive",
                value: k,
            });
        }
        if !alpha.is_finite() {
            return Err(CertifyError::Param {
                what: "density decay rate must be finite",
                value: alpha,
            });
        }
        Ok(Self {
            k,
            alpha,
            log_correction: false,
        })
    }

    /// rho(x) >= K (1 + |x|^2)^{-s} log(1 + |x|^2); the borderline
    /// density with implied decay rate alpha = 2s.
    pub fn log_corrected(k: f64, s: f64) -> Result<Self, CertifyError> {
        if !(k > 0.0) {
            return Err(CertifyError::Param {
                what: "density constant K must be positive",
                value: k,
            });
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(CertifyError::Param {
                what: "fractional order must lie in (0,1)",
                value: s,
            });
        }
        Ok(Self {
            k,
            alpha: 2.0 * s,
            log_correction: true,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn log_correction(&self) -> bool {
        self.log_correction
    }

    /// The certified lower bound at radius r; `s` enters only through
    /// the logarithmic variant.
    pub fn lower_bound(&self, r: f64, s: f64) -> f64 {
        let q = 1.0 + r * r;
        if self.log_correction {
            self.k * q.powf(-s) * q.ln()
        } else {
            self.k * q.powf(-self.alpha / 2.0)
        }
    }

    /// The K-free shape of the lower bound (lower_bound / K).
    pub fn lower_bound_shape(&self, r: f64, s: f64) -> f64 {
        self.lower_bound(r, s) / self.k
    }

    /// A concrete positive density consistent with the bound: the bound
    /// itself for the power case, and the bound plus K (1+r^2)^{-s}
    /// (which keeps it positive at the origin) for the logarithmic one.
    pub fn rho(&self, r: f64, s: f64) -> f64 {
        if self.log_correction {
            let q = 1.0 + r * r;
            self.k * q.powf(-s) * (1.0 + q.ln())
        } else {
            self.lower_bound(r, s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_bound() {
        let d = DensityModel::power_law(2.0, 1.0).unwrap();
        assert_eq!(d.lower_bound(0.0, 0.5), 2.0);
        assert!((d.lower_bound(3.0, 0.5) - 2.0 / 10.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.rho(3.0, 0.5), d.lower_bound(3.0, 0.5));
    }

    #[test]
    fn log_corrected_is_positive_and_dominates_bound() {
        let d = DensityModel::log_corrected(1.0, 0.5).unwrap();
        assert_eq!(d.lower_bound(0.0, 0.5), 0.0);
        assert!(d.rho(0.0, 0.5) > 0.0);
        for r in [0.1, 1.0, 10.0, 100.0] {
            assert!(d.rho(r, 0.5) >= d.lower_bound(r, 0.5));
            assert!(d.lower_bound(r, 0.5) > 0.0);
        }
        assert!((d.alpha() - 1.0).abs() < 1e-15);
        assert!(d.log_correction());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DensityModel::power_law(0.0, 1.0).is_err());
        assert!(DensityModel::log_corrected(1.0, 1.0).is_err());
    }
}
