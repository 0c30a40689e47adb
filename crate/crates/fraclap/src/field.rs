//! Evaluable scalar fields on R^N with a declared decay class and
//! smoothness grade. The decay class is what lets the quadrature
//! certify its tail truncation; the smoothness grade gates the
//! symmetrized singular quadrature.

use std::sync::Arc;

type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// How |u(x)| is bounded for large |x|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayClass {
    /// u vanishes identically outside |x| <= radius.
    CompactSupport { radius: f64 },
    /// |u(x)| <= scale * (1 + |x|^2)^{-exponent/2}.
    PowerDecay { exponent: f64, scale: f64 },
    /// |u(x)| <= bound everywhere, no decay assumed.
    Bounded { bound: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Smoothness {
    C0,
    C1,
    C2,
    CInf,
}

/// A real-valued function of a point in R^N. Point dimensionality is
/// checked by the evaluators that consume the field.
#[derive(Clone)]
pub struct ScalarField {
    eval: FieldFn,
    decay: DecayClass,
    smoothness: Smoothness,
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField")
            .field("decay", &self.decay)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

impl ScalarField {
    pub fn new(
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        decay: DecayClass,
        smoothness: Smoothness,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            decay,
            smoothness,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    /// An upper bound for |u| on all of R^N implied by the decay class.
    pub fn sup_bound(&self) -> f64 {
        match self.decay {
            DecayClass::CompactSupport { .. } => f64::NAN, // not derivable; callers use decay-specific paths
            DecayClass::PowerDecay { scale, .. } => scale,
            DecayClass::Bounded { bound } => bound,
        }
    }

    /// exp(-|x|^2); treated as compactly supported at the radius where
    /// it falls below 1e-300.
    pub fn gaussian() -> Self {
        Self::new(
            |x: &[f64]| (-x.iter().map(|v| v * v).sum::<f64>()).exp(),
            DecayClass::CompactSupport { radius: 27.0 },
            Smoothness::CInf,
        )
    }

    /// The radial weight (1 + |x|^2)^{-beta/2}.
    pub fn radial_weight(beta: f64) -> Self {
        Self::new(
            move |x: &[f64]| (1.0 + x.iter().map(|v| v * v).sum::<f64>()).powf(-beta / 2.0),
            DecayClass::PowerDecay {
                exponent: beta,
                scale: 1.0,
            },
            Smoothness::CInf,
        )
    }

    pub fn constant(c: f64) -> Self {
        Self::new(
            move |_: &[f64]| c,
            DecayClass::Bounded { bound: c.abs() },
            Smoothness::CInf,
        )
    }
}
