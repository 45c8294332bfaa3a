use serde::Serialize;

use super::upper::{krivine_upper, triangle_upper, GrothendieckConstant};
use super::witness::{is_l1_regime, moduli_candidates};
use crate::engine::{constraint_norm_exact, objective, FunctionalFamily, Method};
use crate::error::{Error, Result};
use crate::expr::LatticeExpr;
use crate::space::{ell_r_exponent, SpaceSpec};

/// Two-sided bounds for `‖Σ λ_i |δ_{e_i}|‖` with the witness behind the
/// lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub lambda: Vec<f64>,
    pub space: SpaceSpec,
    /// `1/r = 1/2 + 1/p`; absent for `p <= 2`.
    pub r: Option<f64>,
    pub lower: f64,
    pub upper: f64,
    /// Feasible: its constraint value is at most 1.
    pub witness: FunctionalFamily,
    /// `true` iff the witness's constraint was computed exactly.
    pub certified: bool,
    pub provenance: Vec<Method>,
}

impl Serialize for BoundCertificate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            lambda: &'a [f64],
            n: usize,
            p: crate::space::Exponent,
            r: Option<f64>,
            lower: f64,
            upper: f64,
            certified: bool,
            witness: &'a FunctionalFamily,
            provenance: &'a [Method],
        }
        Repr {
            lambda: &self.lambda,
            n: self.space.n,
            p: self.space.p,
            r: self.r,
            lower: self.lower,
            upper: self.upper,
            certified: self.certified,
            witness: &self.witness,
            provenance: &self.provenance,
        }
        .serialize(serializer)
    }
}

/// Bounds for `Σ λ_i |δ_{e_i}|` in `l_p^n` (`λ` may be shorter than `n`).
///
/// For `p > 2` the lower bound comes from the Walsh witness and the upper
/// bound is `K_G ‖λ‖_r`; for `p <= 2` the all-sign witness and `‖λ‖_1`. Each
/// candidate witness `F` scores `objective / max(constraint, 1)`. When the
/// constraint exceeds the enumeration cap the candidate is scored by its
/// objective alone, relying on the analytic feasibility argument, and the
/// certificate is marked uncertified.
pub fn certify_moduli_norm(
    lambda: &[f64],
    space: SpaceSpec,
    kg: GrothendieckConstant,
    cap: usize,
) -> Result<BoundCertificate> {
    let candidates = moduli_candidates(lambda, space)?;
    let f = LatticeExpr::moduli_combination_in(lambda, space.n)?;

    let mut best: Option<(f64, bool, Method, FunctionalFamily)> = None;
    for (method, family) in candidates {
        let obj = objective(&f, &family)?;
        let (lower, certified, witness) = match constraint_norm_exact(&family, cap) {
            Ok(c) if c > 1.0 => (obj / c, true, family.scaled(1.0 / c)),
            Ok(_) => (obj, true, family),
            Err(Error::Capacity { .. }) => (obj, false, family),
            Err(e) => return Err(e),
        };
        let better = match &best {
            None => true,
            Some((l, c, _, _)) => lower > *l || (lower == *l && certified && !c),
        };
        if better {
            best = Some((lower, certified, method, witness));
        }
    }
    let (lower, certified, method, witness) = best.ok_or_else(|| {
        Error::Capacity {
            what: format!("a witness for {} nonzero coefficients", lambda.iter().filter(|v| **v != 0.0).count()),
            required: lambda.len(),
            cap: super::witness::MAX_ALLSIGN_SUPPORT,
        }
    })?;

    let mut provenance = vec![method];
    if !certified {
        provenance.push(Method::AnalyticFeasibility);
    }
    let (r, upper) = if is_l1_regime(space.p) {
        provenance.push(Method::TriangleUpper);
        (None, triangle_upper(lambda))
    } else {
        provenance.push(Method::KrivineUpper);
        (Some(ell_r_exponent(space.p)?), krivine_upper(lambda, space.p, kg)?)
    };
    Ok(BoundCertificate {
        lambda: lambda.to_vec(),
        space,
        r,
        lower,
        upper,
        witness,
        certified,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Exponent;

    fn certify(lambda: &[f64], p: f64) -> BoundCertificate {
        let sp = SpaceSpec::new(lambda.len(), Exponent::new(p).unwrap()).unwrap();
        certify_moduli_norm(lambda, sp, GrothendieckConstant::default(), 24).unwrap()
    }

    #[test]
    fn documented_examples() {
        let kg = GrothendieckConstant::default().value();
        let c = certify(&[1.0; 4], 4.0);
        assert!((c.lower - 4f64.powf(0.75)).abs() < 1e-12);
        assert!((c.upper - kg * 4f64.powf(0.75)).abs() < 1e-12);
        assert!(c.certified);
        assert_eq!(c.r, Some(4.0 / 3.0));

        let c = certify(&[1.0; 4], f64::INFINITY);
        assert!((c.lower - 2.0).abs() < 1e-12);
        assert!((c.upper - 2.0 * kg).abs() < 1e-12);

        let c = certify(&[1.0, 2.0, 3.0], 1.0);
        assert_eq!(c.lower, 6.0);
        assert_eq!(c.upper, 6.0);
        assert_eq!(c.r, None);
        assert_eq!(c.provenance, vec![Method::AllsignWitness, Method::TriangleUpper]);
    }

    #[test]
    fn uncertified_when_family_is_too_large() {
        // p = 1.5 with 5 nonzero coefficients needs 32 vectors
        let c = certify(&[1.0; 5], 1.5);
        assert!(!c.certified);
        assert!(c.provenance.contains(&Method::AnalyticFeasibility));
        assert_eq!(c.lower, 5.0);
        // p = 1 is certified through the closed form
        assert!(certify(&[1.0; 10], 1.0).certified);
    }

    #[test]
    fn mixed_signs_use_sign_classes() {
        let c = certify(&[1.0, -1.0, 2.0], 1.0);
        assert_eq!(c.lower, 4.0);
        let d = certify(&[1.0, -1.0], 4.0);
        assert!(d.lower >= 1.0 && d.lower <= d.upper);
    }

    #[test]
    fn json_shape() {
        let c = certify(&[1.0], 1.0);
        let text = serde_json::to_string(&c).unwrap();
        let keys = ["lambda", "n", "p", "r", "lower", "upper", "certified", "witness", "provenance"];
        let positions: Vec<usize> = keys
            .iter()
            .map(|k| text.find(&format!("\"{k}\":")).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
        assert!(text.contains(r#""r":null"#));
    }
}
