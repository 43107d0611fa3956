use serde::{Deserialize, Serialize};

use crate::sequence::FiniteSequence;

/// How an upper bound was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperMethod {
    /// `‖a‖_{M_{ℓ²}} = ‖a‖_∞`.
    LinfExact,
    /// Calibrated `c · (‖a‖_∞ + V(a))`.
    Stechkin,
    /// `√(upper_X · upper_{X'})`, advisory only.
    GeometricMean,
    BoydInterp,
    /// Closed-form Hölder dual of a weighted Lebesgue norm.
    HolderExact,
    /// Best factorization found by search (Calderón products).
    Factorization,
}

impl UpperMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            UpperMethod::LinfExact => "linf-exact",
            UpperMethod::Stechkin => "stechkin",
            UpperMethod::GeometricMean => "geometric-mean",
            UpperMethod::BoydInterp => "boyd-interp",
            UpperMethod::HolderExact => "holder-exact",
            UpperMethod::Factorization => "factorization",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimateParams {
    /// Section half-width or support radius.
    pub n: usize,
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

/// A certified lower bound paired with an optional method-tagged upper bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub lower: f64,
    pub upper: Option<f64>,
    pub method: Option<UpperMethod>,
    /// Vector attaining `lower`, when one exists.
    pub witness: Option<FiniteSequence>,
    pub params: EstimateParams,
    /// Consistency value that is reported but never used as a bound.
    pub advisory: Option<f64>,
}

impl BoundEstimate {
    pub fn lower_only(lower: f64, witness: Option<FiniteSequence>, params: EstimateParams) -> Self {
        Self {
            lower,
            upper: None,
            method: None,
            witness,
            params,
            advisory: None,
        }
    }

    /// `lower ≤ upper + tol` whenever an upper bound exists.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.upper.is_none_or(|u| self.lower <= u + tol)
    }
}
