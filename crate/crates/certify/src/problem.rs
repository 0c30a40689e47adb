//! Problem bundles and the case classification of the uniqueness
//! conditions on (alpha, beta, s, N).

use serde::Serialize;

use fraclap::FracOrder;
use numerics::integrate_with_breakpoints;

use crate::density::DensityModel;
use crate::CertifyError;

#[derive(Debug, Clone, Copy, Serialize)]
pub enum ProblemKind {
    /// Parabolic problem up to the given time horizon.
    Parabolic { horizon: f64 },
    /// Elliptic problem with a zero-order coefficient floor c0.
    Elliptic { floor: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ProblemSpec {
    #[serde(skip)]
    fo: FracOrder,
    pub s: f64,
    pub dim: u32,
    pub density: DensityModel,
    pub beta: f64,
    pub p: f64,
    pub kind: ProblemKind,
}

impl ProblemSpec {
    pub fn parabolic(
        fo: FracOrder,
        density: DensityModel,
        beta: f64,
        p: f64,
        horizon: f64,
    ) -> Result<Self, CertifyError> {
        Self::build(fo, density, beta, p, ProblemKind::Parabolic { horizon })
    }

    pub fn elliptic(
        fo: FracOrder,
        density: DensityModel,
        beta: f64,
        p: f64,
        floor: f64,
    ) -> Result<Self, CertifyError> {
        if !(floor > 0.0) {
            return Err(CertifyError::Param {
                what: "elliptic zero-order floor c0 must be positive",
                value: floor,
            });
        }
        Self::build(fo, density, beta, p, ProblemKind::Elliptic { floor })
    }

    fn build(
        fo: FracOrder,
        density: DensityModel,
        beta: f64,
        p: f64,
        kind: ProblemKind,
    ) -> Result<Self, CertifyError> {
        if !(beta > 0.0) {
            return Err(CertifyError::Param {
                what: "weight exponent beta must be positive",
                value: beta,
            });
        }
        if !(p >= 1.0) {
            return Err(CertifyError::Param {
                what: "Lebesgue exponent p must be at least 1",
                value: p,
            });
        }
        if let ProblemKind::Parabolic { horizon } = kind {
            if !(horizon > 0.0) {
                return Err(CertifyError::Param {
                    what: "parabolic horizon must be positive",
                    value: horizon,
                });
            }
        }
        Ok(Self {
            fo,
            s: fo.s(),
            dim: fo.dim(),
            density,
            beta,
            p,
            kind,
        })
    }

    pub fn order(&self) -> FracOrder {
        self.fo
    }
}

/// The four uniqueness cases plus the fall-through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
    None,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseLabel::I => "I",
            CaseLabel::II => "II",
            CaseLabel::III => "III",
            CaseLabel::IV => "IV",
            CaseLabel::None => "NONE",
        };
        write!(f, "{s}")
    }
}

/// Total, deterministic classification:
/// I:   0 < beta <= N - 2s (any alpha)
/// II:  N - 2s < beta < N and alpha <= 2s
/// III: beta = N and (alpha < 2s or the log-corrected density)
/// IV:  beta > N and alpha + beta <= 2s + N
///
/// Boundaries use exact floating-point comparison: beta = N - 2s maps
/// to I, beta = N maps to the case III conditions.
pub fn classify(spec: &ProblemSpec) -> CaseLabel {
    let n = spec.dim as f64;
    let s = spec.s;
    let beta = spec.beta;
    let alpha = spec.density.alpha();
    let two_s = 2.0 * s;
    if beta <= n - two_s {
        return CaseLabel::I; // beta > 0 holds by construction
    }
    if beta < n {
        return if alpha <= two_s {
            CaseLabel::II
        } else {
            CaseLabel::None
        };
    }
    if beta == n {
        return if alpha < two_s || spec.density.log_correction() {
            CaseLabel::III
        } else {
            CaseLabel::None
        };
    }
    if alpha + beta <= two_s + n {
        CaseLabel::IV
    } else {
        CaseLabel::None
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthScan {
    pub sigma: f64,
    pub beta_implied: f64,
    pub admissible: bool,
    /// Truncated-integral values at doubling radii; their increments
    /// shrink exactly when the weighted integral converges.
    pub truncated_integrals: Vec<(f64, f64)>,
    pub scan_converges: bool,
}

/// Membership of a growth-sigma function class in the weighted space
/// with the implied exponent beta = N + 2s - alpha: admissible exactly
/// when sigma < 2s - alpha; the symbolic verdict is accompanied by a
/// truncated-integral growth scan.
pub fn growth_membership(sigma: f64, spec: &ProblemSpec) -> Result<GrowthScan, CertifyError> {
    let n = spec.dim as f64;
    let s = spec.s;
    let alpha = spec.density.alpha();
    if !(alpha < 2.0 * s) {
        return Err(CertifyError::Param {
            what: "growth membership requires alpha < 2s",
            value: alpha,
        });
    }
    let beta = n + 2.0 * s - alpha;
    let admissible = sigma < 2.0 * s - alpha;

    // integral of (1+r^2)^{(sigma-beta)/2} r^{N-1} up to doubling radii
    let exponent = (sigma - beta) / 2.0;
    let mut vals = Vec::new();
    let mut x = 10.0;
    for _ in 0..7 {
        let v = integrate_with_breakpoints(
            &mut |r: f64| (1.0 + r * r).powf(exponent) * r.powf(n - 1.0),
            &[0.0, 1.0, x / 2.0, x],
            1e-10,
            1e-9,
            4000,
        )
        .map_err(|_| CertifyError::Numerical {
            what: "growth scan quadrature failed",
        })?;
        vals.push((x, v.value));
        x *= 2.0;
    }
    // convergent scans have geometrically shrinking increments
    let inc1 = vals[2].1 - vals[1].1;
    let inc_last = vals[6].1 - vals[5].1;
    let scan_converges = inc_last < 0.5 * inc1 || inc_last < 1e-9 * vals[6].1;
    Ok(GrowthScan {
        sigma,
        beta_implied: beta,
        admissible,
        truncated_integrals: vals,
        scan_converges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u32, s: f64, alpha: f64, beta: f64) -> ProblemSpec {
        ProblemSpec::parabolic(
            FracOrder::new(s, n).unwrap(),
            DensityModel::power_law(1.0, alpha).unwrap(),
            beta,
            1.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&spec(3, 0.5, 10.0, 1.5)), CaseLabel::I);
        assert_eq!(classify(&spec(1, 0.75, 0.0, 2.5)), CaseLabel::IV);
        // beta = N, alpha = 2s: unclassified without the log correction
        assert_eq!(classify(&spec(1, 0.5, 1.0, 1.0)), CaseLabel::None);
        let with_log = ProblemSpec::parabolic(
            FracOrder::new(0.5, 1).unwrap(),
            DensityModel::log_corrected(1.0, 0.5).unwrap(),
            1.0,
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(classify(&with_log), CaseLabel::III);
    }

    #[test]
    fn boundaries_are_deterministic() {
        // beta = N - 2s belongs to case I
        assert_eq!(classify(&spec(3, 0.5, 7.0, 2.0)), CaseLabel::I);
        // beta = N with alpha < 2s belongs to case III
        assert_eq!(classify(&spec(2, 0.5, 0.3, 2.0)), CaseLabel::III);
        // alpha + beta = 2s + N boundary belongs to IV
        assert_eq!(classify(&spec(1, 0.5, 0.5, 1.5)), CaseLabel::IV);
        // just outside
        assert_eq!(classify(&spec(1, 0.5, 0.6, 1.5)), CaseLabel::None);
        // beta = N - 2s exactly is still case I
        assert_eq!(classify(&spec(1, 0.25, 1.0, 0.5)), CaseLabel::I);
        // between N - 2s and N with supercritical alpha
        assert_eq!(classify(&spec(1, 0.25, 1.0, 0.7)), CaseLabel::None);
    }

    #[test]
    fn growth_examples() {
        let sp = spec(1, 0.5, 0.0, 1.0);
        // sigma inside (0, 2s - alpha)
        let g = growth_membership(0.5, &sp).unwrap();
        assert!(g.admissible && g.scan_converges);
        assert!((g.beta_implied - 2.0).abs() < 1e-14);
        // borderline sigma = 2s - alpha diverges logarithmically
        let g = growth_membership(1.0, &sp).unwrap();
        assert!(!g.admissible && !g.scan_converges);
        // bounded data (sigma -> 0) stays admissible
        let g = growth_membership(1e-9, &sp).unwrap();
        assert!(g.admissible && g.scan_converges);
    }

    #[test]
    fn growth_requires_subcritical_alpha() {
        let sp = spec(1, 0.5, 1.0, 1.0);
        assert!(growth_membership(0.1, &sp).is_err());
    }
}
