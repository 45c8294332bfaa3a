//! The feasibility constraint `sup_{x ∈ B_E} Σ_k |<x*_k, x>|` of a family.
//!
//! Exchanging the supremum over the ball with the choice of signs gives
//!
//! ```text
//! sup_{x ∈ B_E} Σ_k |<x*_k, x>| = max_{σ ∈ {±1}^M} ‖Σ_k σ_k x*_k‖_{p'}
//! ```
//!
//! and since `σ` and `-σ` give the same value only `2^{M-1}` patterns need to
//! be visited. Two closed forms avoid the enumeration: for `p = 1` the
//! extreme points of the ball are `±e_i`, and for `p = inf` they are the
//! `2^{n-1}` sign vectors up to a global sign.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Uniform};
use rayon::prelude::*;

use super::family::FunctionalFamily;
use crate::error::{Error, Result};
use crate::space::{dual_exponent, power_sum, Exponent};

pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Patterns below this many free sign bits are enumerated on one thread.
const SERIAL_BITS: usize = 12;
/// Sign bits fixed per parallel task.
const TASK_BITS: usize = 8;

/// The quantity maximized over sign patterns, before taking the root:
/// `Σ |s_i|^q` for finite `q`, `max |s_i|` for `q = inf`.
#[inline]
fn dual_power(s: &[f64], q: Exponent) -> f64 {
    match q {
        Exponent::Finite(q) => power_sum(s, q),
        Exponent::Infinite => s.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
    }
}

#[inline]
fn dual_root(v: f64, q: Exponent) -> f64 {
    match q {
        Exponent::Finite(q) if q == 1.0 => v,
        Exponent::Finite(q) if q == 2.0 => v.sqrt(),
        Exponent::Finite(q) => v.powf(1.0 / q),
        Exponent::Infinite => v,
    }
}

/// Which exact method computes the constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// `max_i Σ_k |x*_{k,i}|` (`p = 1`).
    L1ClosedForm,
    /// Enumeration of `2^{M-1}` sign patterns on the family.
    SignPatterns,
    /// Enumeration of the `2^{n-1}` vertices of the `l_inf` ball (`p = inf`).
    LinfVertices,
}

/// Picks the cheapest exact route, or fails when every route exceeds `cap`.
pub fn exact_route(family: &FunctionalFamily, cap: usize) -> Result<Route> {
    route_for(family.space().p, family.len(), family.dim(), cap)
}

/// The exact route for `m` vectors in `l_p^n`.
pub(crate) fn route_for(p: Exponent, m: usize, n: usize, cap: usize) -> Result<Route> {
    match p {
        Exponent::Finite(p) if p == 1.0 => Ok(Route::L1ClosedForm),
        Exponent::Infinite => {
            if m <= cap && m <= n {
                Ok(Route::SignPatterns)
            } else if n <= cap {
                Ok(Route::LinfVertices)
            } else {
                Err(Error::Capacity {
                    what: format!("a family of {m} vectors in dimension {n}"),
                    required: m.min(n),
                    cap,
                })
            }
        }
        Exponent::Finite(_) => {
            if m <= cap {
                Ok(Route::SignPatterns)
            } else {
                Err(Error::Capacity {
                    what: format!("a family of {m} vectors"),
                    required: m,
                    cap,
                })
            }
        }
    }
}

/// Exact value of `sup_{x ∈ B_E} Σ_k |<x*_k, x>|`.
pub fn constraint_norm_exact(family: &FunctionalFamily, cap: usize) -> Result<f64> {
    Ok(match exact_route(family, cap)? {
        Route::L1ClosedForm => constraint_l1_closed_form(family),
        Route::SignPatterns => sign_pattern_value(family),
        Route::LinfVertices => linf_vertex_value(family),
    })
}

/// `max_i Σ_k |x*_{k,i}|`: the constraint for `p = 1`, whatever the family's
/// space says.
pub fn constraint_l1_closed_form(family: &FunctionalFamily) -> f64 {
    let n = family.dim();
    let mut best = 0.0_f64;
    for i in 0..n {
        let mut col = 0.0;
        for v in family.vectors() {
            col += v[i].abs();
        }
        best = best.max(col);
    }
    best
}

/// `max_σ ‖Σ_k σ_k x*_k‖_{p'}` by enumeration, for any `p`.
pub fn constraint_by_sign_patterns(family: &FunctionalFamily, cap: usize) -> Result<f64> {
    if family.len() > cap {
        return Err(Error::Capacity {
            what: format!("a family of {} vectors", family.len()),
            required: family.len(),
            cap,
        });
    }
    Ok(sign_pattern_value(family))
}

/// `max_{v ∈ {±1}^n} Σ_k |<x*_k, v>|`: the constraint for `p = inf`,
/// whatever the family's space says.
pub fn constraint_by_linf_vertices(family: &FunctionalFamily, cap: usize) -> Result<f64> {
    if family.dim() > cap {
        return Err(Error::Capacity {
            what: format!("the l_inf ball in dimension {}", family.dim()),
            required: family.dim(),
            cap,
        });
    }
    Ok(linf_vertex_value(family))
}

fn sign_pattern_value(family: &FunctionalFamily) -> f64 {
    let q = dual_exponent(family.space().p);
    let best = max_over_signs(family.as_flat(), family.len(), family.dim(), q);
    dual_root(best, q)
}

fn linf_vertex_value(family: &FunctionalFamily) -> f64 {
    let (m, n) = (family.len(), family.dim());
    // vertex v contributes Σ_k |<x*_k, v>| = ‖Σ_i v_i y_i‖_1 with y_i the
    // i-th column of the family
    let mut columns = vec![0.0; m * n];
    for (k, v) in family.vectors().enumerate() {
        for (i, x) in v.iter().enumerate() {
            columns[i * m + k] = *x;
        }
    }
    max_over_signs(&columns, n, m, Exponent::ONE)
}

/// `max_{σ ∈ {±1}^count, σ_0 = +1} Φ_q(Σ_k σ_k rows_k)` where `rows` holds
/// `count` vectors of length `len`. Partial sums are accumulated strictly in
/// row order, so every leaf is bit-identical to the sequential sum
/// `((σ_0 r_0 + σ_1 r_1) + σ_2 r_2) + ...` regardless of how the work is
/// split across threads.
fn max_over_signs(rows: &[f64], count: usize, len: usize, q: Exponent) -> f64 {
    let free = count - 1;
    if free <= SERIAL_BITS {
        return prefix_search(rows, count, len, q, 0, 0);
    }
    let task_bits = TASK_BITS.min(free);
    (0..1usize << task_bits)
        .into_par_iter()
        .map(|prefix| prefix_search(rows, count, len, q, prefix, task_bits))
        .reduce(|| 0.0, f64::max)
}

/// Fixes the signs of rows `1..=bits` from the bits of `prefix` (set bit means
/// `-1`) and enumerates the rest depth-first.
fn prefix_search(rows: &[f64], count: usize, len: usize, q: Exponent, prefix: usize, bits: usize) -> f64 {
    let mut levels = vec![0.0; count * len];
    levels[..len].copy_from_slice(&rows[..len]);
    for k in 1..=bits {
        let sign = if prefix >> (k - 1) & 1 == 1 { -1.0 } else { 1.0 };
        let (done, rest) = levels.split_at_mut(k * len);
        let prev = &done[(k - 1) * len..];
        let row = &rows[k * len..(k + 1) * len];
        for i in 0..len {
            rest[i] = prev[i] + sign * row[i];
        }
    }
    descend(rows, count, len, q, &mut levels, bits + 1)
}

fn descend(rows: &[f64], count: usize, len: usize, q: Exponent, levels: &mut [f64], k: usize) -> f64 {
    if k == count {
        return dual_power(&levels[(count - 1) * len..count * len], q);
    }
    let mut best = 0.0_f64;
    for sign in [1.0, -1.0] {
        {
            let (done, rest) = levels.split_at_mut(k * len);
            let prev = &done[(k - 1) * len..];
            let row = &rows[k * len..(k + 1) * len];
            for i in 0..len {
                rest[i] = prev[i] + sign * row[i];
            }
        }
        best = best.max(descend(rows, count, len, q, levels, k + 1));
    }
    best
}

/// `Σ_k σ_k x*_k` accumulated in row order, matching the enumeration.
fn signed_sum(family: &FunctionalFamily, signs: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for (k, v) in family.vectors().enumerate() {
        if k == 0 {
            for (o, x) in out.iter_mut().zip(v) {
                *o = signs[0] * x;
            }
        } else {
            for (o, x) in out.iter_mut().zip(v) {
                *o += signs[k] * x;
            }
        }
    }
}

/// A lower bound on the constraint found by greedy single-sign-flip ascent
/// from `restarts` random sign patterns. Never exceeds the exact value: the
/// returned value is recomputed in the same summation order as the exact
/// enumeration.
pub fn constraint_norm_heuristic(family: &FunctionalFamily, restarts: usize, seed: u64) -> f64 {
    let (m, n) = (family.len(), family.dim());
    let q = dual_exponent(family.space().p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0_f64;
    let mut signs = vec![1.0; m];
    let mut s = vec![0.0; n];
    let mut trial = vec![0.0; n];
    for _ in 0..restarts.max(1) {
        for sg in signs.iter_mut() {
            *sg = if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
        signed_sum(family, &signs, &mut s);
        let mut value = dual_power(&s, q);
        loop {
            let mut flip = None;
            let mut flip_value = value;
            for k in 0..m {
                let x = family.vector(k);
                for i in 0..n {
                    trial[i] = s[i] - 2.0 * signs[k] * x[i];
                }
                let v = dual_power(&trial, q);
                if v > flip_value {
                    flip_value = v;
                    flip = Some(k);
                }
            }
            match flip {
                Some(k) => {
                    signs[k] = -signs[k];
                    signed_sum(family, &signs, &mut s);
                    value = dual_power(&s, q);
                }
                None => break,
            }
        }
        best = best.max(value);
    }
    dual_root(best, q)
}

/// Draws a point on the unit sphere of `l_p^n` from the cone measure: i.i.d.
/// coordinates with density `∝ exp(-|t|^p)` (uniform for `p = inf`),
/// normalized.
pub(crate) fn sample_sphere_point(rng: &mut impl Rng, p: Exponent, out: &mut [f64]) {
    loop {
        match p {
            Exponent::Infinite => {
                let u = Uniform::new_inclusive(-1.0, 1.0).expect("valid range");
                out.iter_mut().for_each(|v| *v = u.sample(rng));
            }
            Exponent::Finite(p) => {
                let g = Gamma::new(1.0 / p, 1.0).expect("positive shape");
                for v in out.iter_mut() {
                    let magnitude: f64 = g.sample(rng).powf(1.0 / p);
                    *v = if rng.random::<bool>() { magnitude } else { -magnitude };
                }
            }
        }
        let r = crate::space::norm(out, p);
        if r > 0.0 && r.is_finite() {
            out.iter_mut().for_each(|v| *v /= r);
            return;
        }
    }
}

/// `max Σ_k |<x*_k, x>|` over `samples` random points of the unit sphere of
/// the family's space: an independent lower oracle for the constraint.
pub fn sample_constraint_lower(family: &FunctionalFamily, samples: usize, seed: u64) -> f64 {
    let p = family.space().p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; family.dim()];
    let mut best = 0.0_f64;
    for _ in 0..samples {
        sample_sphere_point(&mut rng, p, &mut x);
        let value: f64 = family
            .vectors()
            .map(|v| v.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>().abs())
            .sum();
        best = best.max(value);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceSpec;

    fn fam(p: Exponent, vectors: Vec<Vec<f64>>) -> FunctionalFamily {
        let n = vectors[0].len();
        FunctionalFamily::new(SpaceSpec::new(n, p).unwrap(), vectors).unwrap()
    }

    // Brute force over all 2^M sign patterns, no symmetry reduction, naive sums.
    fn brute_force(f: &FunctionalFamily) -> f64 {
        let q = dual_exponent(f.space().p);
        let (m, n) = (f.len(), f.dim());
        let mut best = 0.0_f64;
        for mask in 0..1usize << m {
            let mut s = vec![0.0; n];
            for k in 0..m {
                let sign = if mask >> k & 1 == 1 { -1.0 } else { 1.0 };
                for i in 0..n {
                    s[i] += sign * f.vector(k)[i];
                }
            }
            best = best.max(crate::space::norm(&s, q));
        }
        best
    }

    #[test]
    fn documented_examples() {
        let f = fam(Exponent::TWO, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(constraint_norm_exact(&f, 24).unwrap(), 2f64.sqrt());
        for p in [Exponent::ONE, Exponent::Finite(1.5), Exponent::TWO, Exponent::Finite(3.0), Exponent::Infinite] {
            let g = fam(p, vec![vec![1.0, 0.0, 0.0]]);
            assert_eq!(constraint_norm_exact(&g, 24).unwrap(), 1.0);
        }
        let h = fam(Exponent::ONE, vec![vec![1.0, 1.0], vec![1.0, -1.0]]);
        assert_eq!(constraint_norm_exact(&h, 24).unwrap(), 2.0);
        assert_eq!(constraint_by_sign_patterns(&h, 24).unwrap(), 2.0);
    }

    #[test]
    fn zero_family() {
        for p in [Exponent::ONE, Exponent::Finite(3.0), Exponent::Infinite] {
            let f = fam(p, vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
            assert_eq!(constraint_norm_exact(&f, 24).unwrap(), 0.0);
            assert_eq!(constraint_norm_heuristic(&f, 3, 1), 0.0);
        }
    }

    #[test]
    fn routes_agree_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let m = 1 + trial % 7;
            let n = 1 + trial % 4;
            let p = [Exponent::ONE, Exponent::Finite(1.5), Exponent::TWO, Exponent::Finite(3.0), Exponent::Infinite][trial % 5];
            let vectors: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect())
                .collect();
            let f = fam(p, vectors);
            let exact = constraint_norm_exact(&f, 24).unwrap();
            let brute = brute_force(&f);
            assert!((exact - brute).abs() <= 1e-12 * (1.0 + brute), "{exact} vs {brute}");
            let patterns = constraint_by_sign_patterns(&f, 24).unwrap();
            assert!((patterns - brute).abs() <= 1e-12 * (1.0 + brute));
            if p == Exponent::Infinite {
                let vertices = constraint_by_linf_vertices(&f, 24).unwrap();
                assert!((vertices - brute).abs() <= 1e-12 * (1.0 + brute));
            }
        }
    }

    #[test]
    fn parallel_split_matches_serial() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = SERIAL_BITS + 3;
        let n = 3;
        let rows: Vec<f64> = (0..m * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let q = Exponent::Finite(1.7);
        let parallel = max_over_signs(&rows, m, n, q);
        let serial = prefix_search(&rows, m, n, q, 0, 0);
        assert_eq!(parallel, serial);
    }

    #[test]
    fn capacity_errors() {
        let vectors = vec![vec![1.0, 0.5]; 6];
        let f = fam(Exponent::Finite(3.0), vectors.clone());
        assert!(matches!(constraint_norm_exact(&f, 5), Err(Error::Capacity { .. })));
        assert!(constraint_norm_exact(&f, 6).is_ok());
        // p = 1 never needs enumeration, p = inf falls back to vertices
        assert!(constraint_norm_exact(&fam(Exponent::ONE, vectors.clone()), 2).is_ok());
        let g = fam(Exponent::Infinite, vectors);
        assert_eq!(exact_route(&g, 5).unwrap(), Route::LinfVertices);
        assert!(constraint_norm_exact(&g, 1).is_err());
    }

    #[test]
    fn heuristic_is_a_lower_bound() {
        let f = fam(Exponent::ONE, vec![vec![1.0, 0.0, 0.0]]);
        assert_eq!(constraint_norm_heuristic(&f, 4, 0), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let vectors: Vec<Vec<f64>> =
                (0..6).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let g = fam(Exponent::Finite(2.5), vectors);
            assert!(constraint_norm_heuristic(&g, 4, 9) <= constraint_norm_exact(&g, 24).unwrap());
        }
    }

    #[test]
    fn sampling_examples() {
        let f = fam(Exponent::TWO, vec![vec![1.0, 0.0]]);
        let v = sample_constraint_lower(&f, 1000, 1);
        assert!(v > 0.0 && v <= 1.0 + 1e-12);
        let g = fam(Exponent::TWO, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let w = sample_constraint_lower(&g, 100_000, 2);
        assert!(w >= 0.99 * 2f64.sqrt() && w <= 2f64.sqrt() + 1e-12, "{w}");
    }

    #[test]
    fn sphere_points_have_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut x = vec![0.0; 4];
        for p in [Exponent::ONE, Exponent::Finite(1.5), Exponent::Finite(3.0), Exponent::Infinite] {
            for _ in 0..50 {
                sample_sphere_point(&mut rng, p, &mut x);
                assert!((crate::space::norm(&x, p) - 1.0).abs() < 1e-12);
            }
        }
    }
}
