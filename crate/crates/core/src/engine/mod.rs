//! The free-Banach-lattice norm
//!
//! ```text
//! ‖f‖ = sup { Σ_k |f(x*_k)| : sup_{x ∈ B_E} Σ_k |<x*_k, x>| <= 1 }
//! ```
//!
//! evaluated from below. Any nonzero family `F` gives the certified bound
//! `objective(f, F) / constraint(F)` once the constraint is known exactly.

mod constraint;
mod estimate;
mod family;
mod search;

pub use constraint::{
    constraint_by_linf_vertices, constraint_by_sign_patterns, constraint_l1_closed_form,
    constraint_norm_exact, constraint_norm_heuristic, exact_route, sample_constraint_lower, Route,
    DEFAULT_ENUMERATION_CAP,
};
pub use estimate::{Method, NormEstimate};
pub use family::FunctionalFamily;
pub use search::{lower_bound_sweep, optimize_family, optimize_from_seeds, OptimizerConfig};

use crate::error::{Error, Result};
use crate::expr::LatticeExpr;

fn check_dims(f: &LatticeExpr, family: &FunctionalFamily) -> Result<()> {
    if f.dim() != family.dim() {
        return Err(Error::Dimension {
            expected: f.dim(),
            found: family.dim(),
        });
    }
    Ok(())
}

/// `Σ_k |f(x*_k)|`, summed in family order.
pub fn objective(f: &LatticeExpr, family: &FunctionalFamily) -> Result<f64> {
    check_dims(f, family)?;
    Ok(objective_unchecked(f, family))
}

pub(crate) fn objective_unchecked(f: &LatticeExpr, family: &FunctionalFamily) -> f64 {
    let mut total = 0.0;
    for v in family.vectors() {
        total += f.eval_unchecked(v).abs();
    }
    total
}

/// `objective(f, F) / constraint_norm_exact(F)`: a certified lower bound for
/// the norm of `f`. Invariant under positive rescaling of `F`.
pub fn normalized_value(f: &LatticeExpr, family: &FunctionalFamily, cap: usize) -> Result<f64> {
    check_dims(f, family)?;
    let c = constraint_norm_exact(family, cap)?;
    if c == 0.0 {
        return Err(Error::Degenerate(
            "the family has zero constraint value (all vectors vanish)".into(),
        ));
    }
    Ok(objective_unchecked(f, family) / c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Exponent, SpaceSpec};

    fn fam(n: usize, p: Exponent, v: Vec<Vec<f64>>) -> FunctionalFamily {
        FunctionalFamily::new(SpaceSpec::new(n, p).unwrap(), v).unwrap()
    }

    #[test]
    fn objective_examples() {
        let f = LatticeExpr::generator(1, 1).unwrap().abs();
        assert_eq!(objective(&f, &fam(1, Exponent::TWO, vec![vec![1.0]])).unwrap(), 1.0);
        let g = parse_expr("abs(d(e1)) \\/ d(e2)");
        let family = fam(2, Exponent::Finite(3.0), vec![vec![1.0, -2.0], vec![0.5, 3.0]]);
        let base = objective(&g, &family).unwrap();
        assert_eq!(objective(&g, &family.padded_with_zero()).unwrap(), base);
        assert!(objective(&f, &family).is_err());
    }

    fn parse_expr(s: &str) -> LatticeExpr {
        crate::expr::parse(s).unwrap()
    }

    #[test]
    fn normalized_value_is_scale_invariant() {
        let f = LatticeExpr::generator(1, 1).unwrap().abs();
        for t in [0.001, 1.0, 7.5, 100.0] {
            let family = fam(1, Exponent::Finite(3.0), vec![vec![t]]);
            assert!((normalized_value(&f, &family, 24).unwrap() - 1.0).abs() < 1e-15);
        }
        let zero = fam(1, Exponent::TWO, vec![vec![0.0]]);
        assert!(matches!(normalized_value(&f, &zero, 24), Err(Error::Degenerate(_))));
    }

    #[test]
    fn walsh_example_by_hand() {
        // λ = (1,1), p = 4: r = 4/3, b_i = 2^{-1/4}
        let b = 2f64.powf(-0.25);
        let family = fam(
            2,
            Exponent::Finite(4.0),
            vec![vec![b / 2.0, b / 2.0], vec![b / 2.0, -b / 2.0]],
        );
        let f = LatticeExpr::moduli_combination(&[1.0, 1.0]).unwrap();
        let obj = objective(&f, &family).unwrap();
        assert!((obj - 2f64.powf(0.75)).abs() < 1e-15);
        let c = constraint_norm_exact(&family, 24).unwrap();
        assert!(c <= 1.0 + 1e-12);
        assert!(normalized_value(&f, &family, 24).unwrap() >= 1.681793);
    }
}
