use crate::error::{Error, Result};
use crate::expr::{LatticeExpr, Node};
use crate::space::{ell_r_exponent, norm, Exponent, SpaceSpec};

/// A value of Grothendieck's constant used in the upper estimate. Any valid
/// upper bound for the true constant keeps the estimate sound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrothendieckConstant(f64);

impl GrothendieckConstant {
    /// Krivine's bound `π / (2 ln(1 + √2))`.
    pub const KRIVINE: GrothendieckConstant =
        GrothendieckConstant(std::f64::consts::PI / (2.0 * 0.881_373_587_019_543));

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 1.0 {
            return Err(Error::Config(format!(
                "Grothendieck's constant must be a finite value >= 1 (got {value})"
            )));
        }
        Ok(GrothendieckConstant(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for GrothendieckConstant {
    fn default() -> Self {
        Self::KRIVINE
    }
}

/// `K_G ‖λ‖_r`, the upper estimate for `‖Σ λ_i |δ_{e_i}|‖` when `p > 2`.
pub fn krivine_upper(lambda: &[f64], p: Exponent, kg: GrothendieckConstant) -> Result<f64> {
    let r = ell_r_exponent(p)?;
    Ok(kg.value() * norm(lambda, Exponent::Finite(r)))
}

/// `‖λ‖_1`: each `|δ_{e_i}|` has norm one.
pub fn triangle_upper(lambda: &[f64]) -> f64 {
    norm(lambda, Exponent::ONE)
}

fn structural(node: &Node, p: Exponent) -> f64 {
    match node {
        Node::Atom(x) => norm(x, p),
        Node::Scale(c, g) => c.abs() * structural(g, p),
        Node::Abs(g) => structural(g, p),
        Node::Sum(a, b) | Node::Join(a, b) | Node::Meet(a, b) => structural(a, p) + structural(b, p),
    }
}

/// An upper bound for the norm of any expression: `‖δ_x‖ = ‖x‖_p`, the norm
/// is a lattice norm, and `|f ∨ g|, |f ∧ g| <= |f| + |g|`.
pub fn structural_upper(f: &LatticeExpr, space: SpaceSpec) -> Result<f64> {
    if f.dim() != space.n {
        return Err(Error::Dimension {
            expected: space.n,
            found: f.dim(),
        });
    }
    Ok(structural(f.root(), space.p))
}
