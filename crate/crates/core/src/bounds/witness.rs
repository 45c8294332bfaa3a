use super::walsh::{walsh_matrix, MAX_DENSE_ORDER};
use crate::engine::{FunctionalFamily, Method};
use crate::error::{Error, Result};
use crate::space::{ell_r_exponent, Exponent, SpaceSpec};

/// Largest support for which the all-sign family (`2^s` vectors) is built.
pub const MAX_ALLSIGN_SUPPORT: usize = 16;

fn check_lambda(lambda: &[f64], space: SpaceSpec) -> Result<()> {
    if lambda.is_empty() || lambda.len() > space.n {
        return Err(Error::Dimension {
            expected: space.n,
            found: lambda.len(),
        });
    }
    if let Some(v) = lambda.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidValue(format!("coefficient {v} is not finite")));
    }
    if lambda.iter().all(|v| *v == 0.0) {
        return Err(Error::Degenerate("all coefficients are zero".into()));
    }
    Ok(())
}

fn support(lambda: &[f64]) -> Vec<usize> {
    (0..lambda.len()).filter(|&i| lambda[i] != 0.0).collect()
}

/// Walsh functionals on the coordinates `coords`: with `m = 2^k >= coords.len()`,
/// vector `j` has entry `b_t w_{tj} / m` at `coords[t]` and zeros elsewhere,
/// where `b_t = |λ_t|^{r-1} / (Σ |λ|^r)^{1 - 1/r}` (and `b_t = 0` when `λ_t = 0`).
fn walsh_on(lambda: &[f64], coords: &[usize], space: SpaceSpec) -> Result<FunctionalFamily> {
    let r = ell_r_exponent(space.p)?;
    let m = coords.len().next_power_of_two();
    let k = m.trailing_zeros();
    let w = walsh_matrix(k).map_err(|_| Error::Capacity {
        what: format!("a Walsh witness over {} coordinates", coords.len()),
        required: k as usize,
        cap: MAX_DENSE_ORDER as usize,
    })?;
    let total: f64 = coords.iter().map(|&i| lambda[i].abs().powf(r)).sum();
    let denom = total.powf(1.0 - 1.0 / r);
    let b: Vec<f64> = coords
        .iter()
        .map(|&i| {
            if lambda[i] == 0.0 {
                0.0
            } else {
                lambda[i].abs().powf(r - 1.0) / denom
            }
        })
        .collect();
    let n = space.n;
    let mut data = vec![0.0; m * n];
    for j in 0..m {
        for (t, &i) in coords.iter().enumerate() {
            data[j * n + i] = b[t] * f64::from(w.get(t, j)) / m as f64;
        }
    }
    FunctionalFamily::from_flat(space, m, data)
}

/// The Walsh family for `Σ λ_i |δ_{e_i}|` in `l_p^n`, `p > 2`: `λ` is
/// zero-padded to the next power of two `m` and the family has `m` vectors.
/// Its objective is `‖λ‖_r` when all nonzero `λ_i` share a sign.
pub fn walsh_witness(lambda: &[f64], space: SpaceSpec) -> Result<FunctionalFamily> {
    ell_r_exponent(space.p)?;
    check_lambda(lambda, space)?;
    let coords: Vec<usize> = (0..lambda.len()).collect();
    walsh_on(lambda, &coords, space)
}

/// As [`walsh_witness`] but over the support of `λ` only, which can need
/// fewer vectors.
pub fn walsh_witness_on_support(lambda: &[f64], space: SpaceSpec) -> Result<FunctionalFamily> {
    ell_r_exponent(space.p)?;
    check_lambda(lambda, space)?;
    walsh_on(lambda, &support(lambda), space)
}

fn allsign_on(coords: &[usize], space: SpaceSpec) -> Result<FunctionalFamily> {
    let s = coords.len();
    if s > MAX_ALLSIGN_SUPPORT {
        return Err(Error::Capacity {
            what: format!("an all-sign witness over {s} coordinates"),
            required: s,
            cap: MAX_ALLSIGN_SUPPORT,
        });
    }
    let count = 1usize << s;
    let n = space.n;
    let weight = 1.0 / count as f64;
    let mut data = vec![0.0; count * n];
    for j in 0..count {
        for (t, &i) in coords.iter().enumerate() {
            data[j * n + i] = if j >> t & 1 == 1 { -weight } else { weight };
        }
    }
    FunctionalFamily::from_flat(space, count, data)
}

/// The family `{σ / 2^s : σ ∈ {±1}^s}` on the `s` nonzero coordinates of
/// `λ`, for `p <= 2`. For same-sign `λ` its objective is `‖λ‖_1`; its
/// constraint is at most `sup_{‖x‖_p <= 1} ‖x‖_2 = 1`.
pub fn allsign_witness(lambda: &[f64], space: SpaceSpec) -> Result<FunctionalFamily> {
    if ell_r_exponent(space.p).is_ok() {
        return Err(Error::Domain(format!(
            "the all-sign witness needs p <= 2 (got p = {})",
            space.p
        )));
    }
    check_lambda(lambda, space)?;
    allsign_on(&support(lambda), space)
}

/// All-sign blocks built separately on the positive and on the negative
/// coefficients, then concatenated. For `p = 1` its objective is `‖λ‖_1`
/// for any signs.
pub fn split_allsign_witness(lambda: &[f64], space: SpaceSpec) -> Result<FunctionalFamily> {
    if ell_r_exponent(space.p).is_ok() {
        return Err(Error::Domain(format!(
            "the all-sign witness needs p <= 2 (got p = {})",
            space.p
        )));
    }
    check_lambda(lambda, space)?;
    let pos: Vec<usize> = (0..lambda.len()).filter(|&i| lambda[i] > 0.0).collect();
    let neg: Vec<usize> = (0..lambda.len()).filter(|&i| lambda[i] < 0.0).collect();
    match (pos.is_empty(), neg.is_empty()) {
        (false, false) => allsign_on(&pos, space)?.concat(&allsign_on(&neg, space)?),
        _ => allsign_on(&support(lambda), space),
    }
}

fn masked(lambda: &[f64], keep: impl Fn(f64) -> bool) -> Vec<f64> {
    lambda.iter().map(|&v| if keep(v) { v } else { 0.0 }).collect()
}

/// Every closed-form witness that applies to `Σ λ_i |δ_{e_i}|` in `space`,
/// tagged with its construction. When `λ` has coefficients of both signs
/// the constructions are also applied to each sign class separately, since
/// cancellation can make the full witness weak. The witness concentrated on
/// one largest coefficient is always included. Constructions that exceed
/// size limits are skipped.
pub fn moduli_candidates(lambda: &[f64], space: SpaceSpec) -> Result<Vec<(Method, FunctionalFamily)>> {
    check_lambda(lambda, space)?;
    let mixed = lambda.iter().any(|v| *v > 0.0) && lambda.iter().any(|v| *v < 0.0);
    let mut peak = 0;
    for (i, v) in lambda.iter().enumerate() {
        if v.abs() > lambda[peak].abs() {
            peak = i;
        }
    }
    let mut single = vec![0.0; lambda.len()];
    single[peak] = lambda[peak];

    let mut subsets = vec![lambda.to_vec()];
    if mixed {
        subsets.push(masked(lambda, |v| v > 0.0));
        subsets.push(masked(lambda, |v| v < 0.0));
    }
    if support(lambda).len() > 1 {
        subsets.push(single);
    }

    let mut out = Vec::new();
    let keep = |r: Result<FunctionalFamily>| -> Result<Option<FunctionalFamily>> {
        match r {
            Ok(f) => Ok(Some(f)),
            Err(Error::Capacity { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    if ell_r_exponent(space.p).is_ok() {
        if let Some(f) = keep(walsh_witness(lambda, space))? {
            out.push((Method::WalshWitness, f));
        }
        for sub in &subsets {
            let f = keep(walsh_witness_on_support(sub, space))?;
            if let Some(f) = f.filter(|f| out.iter().all(|(_, g)| g != f)) {
                out.push((Method::WalshWitness, f));
            }
        }
    } else {
        if mixed {
            if let Some(f) = keep(split_allsign_witness(lambda, space))? {
                out.push((Method::AllsignWitness, f));
            }
        }
        for sub in &subsets {
            if let Some(f) = keep(allsign_witness(sub, space))? {
                out.push((Method::AllsignWitness, f));
            }
        }
    }
    Ok(out)
}

/// `true` when `p <= 2`, where the all-sign construction applies.
pub(crate) fn is_l1_regime(p: Exponent) -> bool {
    ell_r_exponent(p).is_err()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{constraint_norm_exact, objective};
    use crate::expr::LatticeExpr;
    use crate::space::norm;

    fn space(n: usize, p: f64) -> SpaceSpec {
        SpaceSpec::new(n, Exponent::new(p).unwrap()).unwrap()
    }

    #[test]
    fn walsh_two_coordinates_by_hand() {
        let f = walsh_witness(&[1.0, 1.0], space(2, 4.0)).unwrap();
        let b = 2f64.powf(-0.25);
        assert_eq!(f.len(), 2);
        for (got, want) in f.as_flat().iter().zip([b / 2.0, b / 2.0, b / 2.0, -b / 2.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(constraint_norm_exact(&f, 24).unwrap() <= 1.0 + 1e-12);
    }

    #[test]
    fn walsh_pads_to_power_of_two() {
        let lambda = [1.0, 1.0, 1.0];
        let sp = space(3, 3.0);
        let f = walsh_witness(&lambda, sp).unwrap();
        assert_eq!(f.len(), 4);
        let e = LatticeExpr::moduli_combination(&lambda).unwrap();
        let obj = objective(&e, &f).unwrap();
        assert!((obj - 3f64.powf(5.0 / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn walsh_single_generator() {
        for p in [2.5, 3.0, 7.0, f64::INFINITY] {
            let lambda = [1.0, 0.0, 0.0, 0.0, 0.0];
            let f = walsh_witness(&lambda, space(5, p)).unwrap();
            let e = LatticeExpr::moduli_combination(&lambda).unwrap();
            assert!((objective(&e, &f).unwrap() - 1.0).abs() < 1e-15);
            assert!(constraint_norm_exact(&f, 24).unwrap() <= 1.0 + 1e-12);
            assert_eq!(walsh_witness_on_support(&lambda, space(5, p)).unwrap().len(), 1);
        }
    }

    #[test]
    fn walsh_errors() {
        assert!(matches!(walsh_witness(&[1.0], space(1, 2.0)), Err(Error::Domain(_))));
        assert!(matches!(walsh_witness(&[0.0, 0.0], space(2, 3.0)), Err(Error::Degenerate(_))));
        assert!(matches!(walsh_witness(&[1.0, 1.0], space(1, 3.0)), Err(Error::Dimension { .. })));
    }

    #[test]
    fn allsign_examples() {
        let lambda = [1.0, 2.0, 3.0];
        let f = allsign_witness(&lambda, space(3, 1.0)).unwrap();
        assert_eq!(f.len(), 8);
        assert_eq!(constraint_norm_exact(&f, 24).unwrap(), 1.0);
        let e = LatticeExpr::moduli_combination(&lambda).unwrap();
        assert_eq!(objective(&e, &f).unwrap(), 6.0);

        let g = allsign_witness(&[1.0, 1.0], space(2, 2.0)).unwrap();
        assert_eq!(g.len(), 4);
        assert!(constraint_norm_exact(&g, 24).unwrap() <= 1.0 + 1e-12);
        assert!(matches!(allsign_witness(&[1.0], space(1, 3.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn split_witness_recovers_l1_for_mixed_signs_at_p1() {
        let lambda = [1.5, -2.0, 0.0, 0.5];
        let sp = space(4, 1.0);
        let f = split_allsign_witness(&lambda, sp).unwrap();
        assert_eq!(f.len(), 4 + 2);
        assert_eq!(constraint_norm_exact(&f, 24).unwrap(), 1.0);
        let e = LatticeExpr::moduli_combination(&lambda).unwrap();
        assert_eq!(objective(&e, &f).unwrap(), norm(&lambda, Exponent::ONE));
    }

    #[test]
    fn candidates_cover_sign_classes() {
        let sp = space(3, 4.0);
        assert_eq!(moduli_candidates(&[1.0, 2.0, 3.0], sp).unwrap().len(), 2);
        assert_eq!(moduli_candidates(&[1.0, -2.0, 3.0], sp).unwrap().len(), 4);
        let lone = moduli_candidates(&[0.0, 2.0, 0.0], sp).unwrap();
        assert!(lone.iter().all(|(m, _)| *m == Method::WalshWitness));
    }
}
