use serde::Serialize;

use super::family::FunctionalFamily;
use crate::space::SpaceSpec;

/// How a bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    WalshWitness,
    AllsignWitness,
    Optimizer,
    KrivineUpper,
    TriangleUpper,
    /// Feasibility of the witness follows from a norm inequality, not from
    /// an exact constraint computation.
    AnalyticFeasibility,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::WalshWitness => "walsh-witness",
            Method::AllsignWitness => "allsign-witness",
            Method::Optimizer => "optimizer",
            Method::KrivineUpper => "krivine-upper",
            Method::TriangleUpper => "triangle-upper",
            Method::AnalyticFeasibility => "analytic-feasibility",
        }
    }
}

/// A lower bound with the witness realizing it, and an upper bound when one
/// is known for the expression.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: Option<f64>,
    /// Rescaled so that its constraint value is 1 (up to rounding).
    pub witness: FunctionalFamily,
    /// `true` iff the witness's constraint was computed exactly.
    pub certified: bool,
    pub method: Vec<Method>,
}

impl NormEstimate {
    pub fn space(&self) -> SpaceSpec {
        self.witness.space()
    }

    pub fn family_size(&self) -> usize {
        self.witness.len()
    }

    pub fn method_label(&self) -> String {
        self.method.iter().map(|m| m.as_str()).collect::<Vec<_>>().join("+")
    }
}

impl Serialize for NormEstimate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            lower: f64,
            upper: Option<f64>,
            certified: bool,
            method: &'a [Method],
            witness: &'a FunctionalFamily,
            space: SpaceSpec,
            family_size: usize,
        }
        Repr {
            lower: self.lower,
            upper: self.upper,
            certified: self.certified,
            method: &self.method,
            witness: &self.witness,
            space: self.space(),
            family_size: self.family_size(),
        }
        .serialize(serializer)
    }
}
