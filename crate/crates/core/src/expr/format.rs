use std::fmt::{self, Write};

use super::{LatticeExpr, Node};

fn basis_index(x: &[f64]) -> Option<usize> {
    let mut found = None;
    for (i, v) in x.iter().enumerate() {
        if *v == 1.0 && found.is_none() {
            found = Some(i + 1);
        } else if *v != 0.0 {
            return None;
        }
    }
    found
}

fn scan_atoms(node: &Node, has_dense: &mut bool, basis_max: &mut usize) {
    match node {
        Node::Atom(x) => match basis_index(x) {
            Some(i) => *basis_max = (*basis_max).max(i),
            None => *has_dense = true,
        },
        Node::Scale(_, g) | Node::Abs(g) => scan_atoms(g, has_dense, basis_max),
        Node::Sum(a, b) | Node::Join(a, b) | Node::Meet(a, b) => {
            scan_atoms(a, has_dense, basis_max);
            scan_atoms(b, has_dense, basis_max);
        }
    }
}

fn write_node(out: &mut impl Write, node: &Node, dense_only: bool) -> fmt::Result {
    match node {
        Node::Atom(x) => match basis_index(x).filter(|_| !dense_only) {
            Some(i) => write!(out, "d(e{i})"),
            None => {
                out.write_str("d([")?;
                for (i, v) in x.iter().enumerate() {
                    if i > 0 {
                        out.write_char(',')?;
                    }
                    write!(out, "{v}")?;
                }
                out.write_str("])")
            }
        },
        Node::Scale(c, g) => {
            write!(out, "({c} * ")?;
            write_node(out, g, dense_only)?;
            out.write_char(')')
        }
        Node::Abs(g) => {
            out.write_str("abs(")?;
            write_node(out, g, dense_only)?;
            out.write_char(')')
        }
        Node::Sum(a, b) | Node::Join(a, b) | Node::Meet(a, b) => {
            let op = match node {
                Node::Sum(..) => " + ",
                Node::Join(..) => " \\/ ",
                _ => " /\\ ",
            };
            out.write_char('(')?;
            write_node(out, a, dense_only)?;
            out.write_str(op)?;
            write_node(out, b, dense_only)?;
            out.write_char(')')
        }
    }
}

/// Fully parenthesized rendering accepted by [`super::parse`]. Basis atoms
/// print as `d(e<i>)` unless the dimension could not then be recovered, in
/// which case every atom is written out densely.
impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (mut has_dense, mut basis_max) = (false, 0);
        scan_atoms(self.root(), &mut has_dense, &mut basis_max);
        let dense_only = !has_dense && basis_max < self.dim();
        write_node(f, self.root(), dense_only)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn renders_fully_parenthesized() {
        let f = parse("abs(d(e1)) + 2*abs(d(e2)) \\/ -d([0.5,-1])").unwrap();
        assert_eq!(
            f.to_string(),
            "((abs(d(e1)) + (2 * abs(d(e2)))) \\/ (-1 * d([0.5,-1])))"
        );
        let g = parse("pos(d(e1))").unwrap();
        assert_eq!(g.to_string(), "(d(e1) \\/ d([0]))");
    }

    #[test]
    fn keeps_dimension_when_basis_only() {
        let f = LatticeExpr::generator(1, 3).unwrap().abs();
        let text = f.to_string();
        assert_eq!(text, "abs(d([1,0,0]))");
        assert_eq!(parse(&text).unwrap(), f);
    }
}
