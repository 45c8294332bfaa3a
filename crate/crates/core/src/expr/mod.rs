//! Elements of the free vector lattice over `n` generators.
//!
//! An expression is a tree whose leaves are evaluations `δ_x` (written
//! `d(x)`) and whose inner nodes are scalar multiples, sums and the lattice
//! operations. Semantically it is a positively homogeneous function on the
//! dual space `R^n`: the leaf `δ_x` sends `x*` to `<x*, x>` and every other
//! node acts pointwise.
//!
//! No normal form is computed. Two expressions are considered equal when they
//! agree at (random) dual points.

mod format;
mod parse;

pub use parse::{parse, parse_with_dim};

use crate::error::{Error, Result};

/// A node of the expression tree. Every atom below one [`LatticeExpr`] has
/// the same length, so nodes are only exposed read-only.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// `δ_x`: evaluates to `<x*, x>`.
    Atom(Vec<f64>),
    Scale(f64, Box<Node>),
    Sum(Box<Node>, Box<Node>),
    /// Pointwise maximum.
    Join(Box<Node>, Box<Node>),
    /// Pointwise minimum.
    Meet(Box<Node>, Box<Node>),
    /// Pointwise absolute value.
    Abs(Box<Node>),
}

impl Node {
    /// Evaluates the subtree at `xstar`. The caller guarantees the length.
    pub fn eval(&self, xstar: &[f64]) -> f64 {
        match self {
            Node::Atom(x) => x.iter().zip(xstar).map(|(a, b)| a * b).sum(),
            Node::Scale(c, g) => c * g.eval(xstar),
            Node::Sum(a, b) => a.eval(xstar) + b.eval(xstar),
            Node::Join(a, b) => a.eval(xstar).max(b.eval(xstar)),
            Node::Meet(a, b) => a.eval(xstar).min(b.eval(xstar)),
            Node::Abs(g) => g.eval(xstar).abs(),
        }
    }

    fn map_atoms(&self, f: &impl Fn(&[f64]) -> Vec<f64>) -> Node {
        match self {
            Node::Atom(x) => Node::Atom(f(x)),
            Node::Scale(c, g) => Node::Scale(*c, Box::new(g.map_atoms(f))),
            Node::Sum(a, b) => Node::Sum(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Node::Join(a, b) => Node::Join(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Node::Meet(a, b) => Node::Meet(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Node::Abs(g) => Node::Abs(Box::new(g.map_atoms(f))),
        }
    }

    /// Number of nodes in the subtree.
    pub fn size(&self) -> usize {
        match self {
            Node::Atom(_) => 1,
            Node::Scale(_, g) | Node::Abs(g) => 1 + g.size(),
            Node::Sum(a, b) | Node::Join(a, b) | Node::Meet(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// If the subtree is linear (only atoms, sums and scalings) this returns
    /// the vector `v` with `subtree = δ_v`.
    fn linear_part(&self) -> Option<Vec<f64>> {
        match self {
            Node::Atom(x) => Some(x.clone()),
            Node::Scale(c, g) => g
                .linear_part()
                .map(|v| v.into_iter().map(|t| c * t).collect()),
            Node::Sum(a, b) => {
                let (u, v) = (a.linear_part()?, b.linear_part()?);
                Some(u.iter().zip(&v).map(|(s, t)| s + t).collect())
            }
            _ => None,
        }
    }

    fn moduli_part(&self, dim: usize) -> Option<Vec<f64>> {
        match self {
            Node::Abs(g) => {
                let v = g.linear_part()?;
                let mut nz = v.iter().enumerate().filter(|(_, t)| **t != 0.0);
                let mut lambda = vec![0.0; dim];
                match (nz.next(), nz.next()) {
                    (None, _) => Some(lambda),
                    (Some((i, t)), None) => {
                        lambda[i] = t.abs();
                        Some(lambda)
                    }
                    _ => None,
                }
            }
            Node::Atom(x) if x.iter().all(|t| *t == 0.0) => Some(vec![0.0; dim]),
            Node::Scale(c, g) => g
                .moduli_part(dim)
                .map(|v| v.into_iter().map(|t| c * t).collect()),
            Node::Sum(a, b) => {
                let (u, v) = (a.moduli_part(dim)?, b.moduli_part(dim)?);
                Some(u.iter().zip(&v).map(|(s, t)| s + t).collect())
            }
            _ => None,
        }
    }
}

/// An element of the free vector lattice over `dim` generators.
///
/// Immutable once built; combinators consume their operands and validate
/// that dimensions agree.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeExpr {
    dim: usize,
    root: Node,
}

fn check_finite(what: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::InvalidValue(format!("{what} contains non-finite value {v}"))),
        None => Ok(()),
    }
}

impl LatticeExpr {
    /// `δ_x` for a dense coefficient vector `x`.
    pub fn atom(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidValue("atom vector must be nonempty".into()));
        }
        check_finite("atom", &x)?;
        Ok(LatticeExpr {
            dim: x.len(),
            root: Node::Atom(x),
        })
    }

    /// `δ_{e_i}` in dimension `n`; indices start at 1.
    pub fn generator(i: usize, n: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Index { index: i, dim: n });
        }
        let mut x = vec![0.0; n];
        x[i - 1] = 1.0;
        Ok(LatticeExpr {
            dim: n,
            root: Node::Atom(x),
        })
    }

    /// `δ_0`, the zero function.
    pub fn zero(n: usize) -> Result<Self> {
        Self::atom(vec![0.0; n])
    }

    /// `Σ λ_i |δ_{e_i}|`, the combination of moduli of the generators. The
    /// dimension is `lambda.len()`.
    pub fn moduli_combination(lambda: &[f64]) -> Result<Self> {
        Self::moduli_combination_in(lambda, lambda.len())
    }

    /// As [`LatticeExpr::moduli_combination`], embedded in dimension `n >= lambda.len()`.
    pub fn moduli_combination_in(lambda: &[f64], n: usize) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidValue("coefficient vector is empty".into()));
        }
        if lambda.len() > n {
            return Err(Error::Dimension {
                expected: n,
                found: lambda.len(),
            });
        }
        check_finite("coefficients", lambda)?;
        let term = |i: usize| -> Result<Self> {
            let t = Self::generator(i + 1, n)?.abs();
            Ok(if lambda[i] == 1.0 { t } else { t.scale(lambda[i])? })
        };
        let mut acc = term(0)?;
        for i in 1..lambda.len() {
            acc = acc.add(term(i)?)?;
        }
        Ok(acc)
    }

    pub(crate) fn from_parts(dim: usize, root: Node) -> Self {
        LatticeExpr { dim, root }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    fn combine(self, other: Self, f: fn(Box<Node>, Box<Node>) -> Node) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(LatticeExpr {
            dim: self.dim,
            root: f(Box::new(self.root), Box::new(other.root)),
        })
    }

    pub fn scale(self, c: f64) -> Result<Self> {
        check_finite("scalar", &[c])?;
        Ok(LatticeExpr {
            dim: self.dim,
            root: Node::Scale(c, Box::new(self.root)),
        })
    }

    pub fn neg(self) -> Self {
        LatticeExpr {
            dim: self.dim,
            root: Node::Scale(-1.0, Box::new(self.root)),
        }
    }

    pub fn add(self, other: Self) -> Result<Self> {
        self.combine(other, Node::Sum)
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        self.add(other.neg())
    }

    pub fn join(self, other: Self) -> Result<Self> {
        self.combine(other, Node::Join)
    }

    pub fn meet(self, other: Self) -> Result<Self> {
        self.combine(other, Node::Meet)
    }

    pub fn abs(self) -> Self {
        LatticeExpr {
            dim: self.dim,
            root: Node::Abs(Box::new(self.root)),
        }
    }

    /// `f ∨ 0`.
    pub fn pos_part(self) -> Self {
        let n = self.dim;
        LatticeExpr {
            dim: n,
            root: Node::Join(Box::new(self.root), Box::new(Node::Atom(vec![0.0; n]))),
        }
    }

    /// `(-f) ∨ 0`.
    pub fn neg_part(self) -> Self {
        self.neg().pos_part()
    }

    /// The image under the lattice homomorphism induced by `x ↦ -x`: every
    /// atom `δ_x` becomes `δ_{-x}`. Satisfies `mirror(f)(x*) = f(-x*)`.
    pub fn mirror(&self) -> Self {
        LatticeExpr {
            dim: self.dim,
            root: self.root.map_atoms(&|x| x.iter().map(|t| -t).collect()),
        }
    }

    /// Evaluates at a dual point.
    pub fn evaluate(&self, xstar: &[f64]) -> Result<f64> {
        if xstar.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: xstar.len(),
            });
        }
        Ok(self.root.eval(xstar))
    }

    /// Evaluation without the length check, for hot loops whose inputs were
    /// validated up front.
    #[inline]
    pub(crate) fn eval_unchecked(&self, xstar: &[f64]) -> f64 {
        debug_assert_eq!(xstar.len(), self.dim);
        self.root.eval(xstar)
    }

    /// Recognizes `Σ λ_i |δ_{e_i}|` (up to scalings of the atoms and
    /// regrouping of sums) and returns the coefficient vector of length `dim`.
    pub fn moduli_coefficients(&self) -> Option<Vec<f64>> {
        self.root.moduli_part(self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, n: usize) -> LatticeExpr {
        LatticeExpr::generator(i, n).unwrap()
    }

    // Written independently of `Node::eval` as a stack machine over a
    // post-order listing.
    fn reference_eval(node: &Node, x: &[f64]) -> f64 {
        enum Op<'a> {
            Visit(&'a Node),
            Apply(&'a Node),
        }
        let mut work = vec![Op::Visit(node)];
        let mut values: Vec<f64> = Vec::new();
        while let Some(op) = work.pop() {
            match op {
                Op::Visit(n) => {
                    work.push(Op::Apply(n));
                    match n {
                        Node::Atom(_) => {}
                        Node::Scale(_, g) | Node::Abs(g) => work.push(Op::Visit(g)),
                        Node::Sum(a, b) | Node::Join(a, b) | Node::Meet(a, b) => {
                            work.push(Op::Visit(b));
                            work.push(Op::Visit(a));
                        }
                    }
                }
                Op::Apply(n) => {
                    let v = match n {
                        Node::Atom(a) => {
                            let mut s = 0.0;
                            for i in 0..a.len() {
                                s += a[i] * x[i];
                            }
                            s
                        }
                        Node::Scale(c, _) => c * values.pop().unwrap(),
                        Node::Abs(_) => {
                            let t = values.pop().unwrap();
                            if t < 0.0 {
                                -t
                            } else {
                                t
                            }
                        }
                        Node::Sum(..) | Node::Join(..) | Node::Meet(..) => {
                            let b = values.pop().unwrap();
                            let a = values.pop().unwrap();
                            match n {
                                Node::Sum(..) => a + b,
                                Node::Join(..) => {
                                    if a >= b {
                                        a
                                    } else {
                                        b
                                    }
                                }
                                _ => {
                                    if a <= b {
                                        a
                                    } else {
                                        b
                                    }
                                }
                            }
                        }
                    };
                    values.push(v);
                }
            }
        }
        values.pop().unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(e(1, 2).evaluate(&[3.0, -2.0]).unwrap(), 3.0);
        assert_eq!(e(1, 2).abs().evaluate(&[-3.0, 0.0]).unwrap(), 3.0);
        assert_eq!(e(1, 2).join(e(2, 2)).unwrap().evaluate(&[1.0, 4.0]).unwrap(), 4.0);
        let f = e(1, 2).abs().scale(2.0).unwrap().add(e(2, 2).abs()).unwrap();
        assert_eq!(f.evaluate(&[-1.0, -1.0]).unwrap(), 3.0);
        assert_eq!(reference_eval(f.root(), &[-1.0, -1.0]), 3.0);
    }

    #[test]
    fn dimension_errors() {
        let err = e(1, 2).evaluate(&[1.0, 2.0, 3.0]).unwrap_err();
        assert_eq!(err, Error::Dimension { expected: 2, found: 3 });
        assert!(e(1, 2).add(e(1, 3)).is_err());
        assert!(LatticeExpr::atom(vec![]).is_err());
        assert!(LatticeExpr::atom(vec![f64::NAN]).is_err());
        assert!(e(1, 2).scale(f64::INFINITY).is_err());
    }

    #[test]
    fn generators() {
        assert_eq!(e(2, 3).evaluate(&[5.0, 7.0, 9.0]).unwrap(), 7.0);
        assert_eq!(e(1, 1).evaluate(&[-2.0]).unwrap(), -2.0);
        assert_eq!(
            LatticeExpr::generator(4, 3).unwrap_err(),
            Error::Index { index: 4, dim: 3 }
        );
        assert!(LatticeExpr::generator(0, 3).is_err());
    }

    #[test]
    fn positive_and_negative_parts() {
        assert_eq!(e(1, 1).pos_part().evaluate(&[-2.0]).unwrap(), 0.0);
        assert_eq!(e(1, 1).neg_part().evaluate(&[-2.0]).unwrap(), 2.0);
        assert_eq!(e(1, 1).neg_part().evaluate(&[3.0]).unwrap(), 0.0);
        let z = LatticeExpr::zero(3).unwrap();
        assert_eq!(z.evaluate(&[1.0, -4.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn mirror_negates_the_argument() {
        let f = e(1, 2).pos_part().add(e(2, 2).abs().scale(-0.5).unwrap()).unwrap();
        let g = f.mirror();
        for x in [[1.0, 2.0], [-3.0, 0.5], [0.25, -7.0]] {
            let neg: Vec<f64> = x.iter().map(|t| -t).collect();
            assert_eq!(g.evaluate(&x).unwrap(), f.evaluate(&neg).unwrap());
        }
        // mirror of a positive part is the negative part
        let p = e(1, 2).pos_part().mirror();
        let q = e(1, 2).neg_part();
        for x in [[1.0, 2.0], [-3.0, 0.5]] {
            assert_eq!(p.evaluate(&x).unwrap(), q.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn moduli_pattern_detection() {
        let f = LatticeExpr::moduli_combination(&[1.0, -2.0, 0.5]).unwrap();
        assert_eq!(f.moduli_coefficients(), Some(vec![1.0, -2.0, 0.5]));
        // |δ_{3 e_2}| = 3 |δ_{e_2}|
        let g = LatticeExpr::atom(vec![0.0, -3.0]).unwrap().abs();
        assert_eq!(g.moduli_coefficients(), Some(vec![0.0, 3.0]));
        let h = e(1, 2).add(e(2, 2)).unwrap().abs();
        assert_eq!(h.moduli_coefficients(), None);
        assert_eq!(e(1, 2).pos_part().moduli_coefficients(), None);
        let k = e(1, 2).abs().add(e(2, 2).abs()).unwrap().scale(2.0).unwrap();
        assert_eq!(k.moduli_coefficients(), Some(vec![2.0, 2.0]));
    }
}
