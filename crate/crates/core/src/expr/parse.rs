//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! lattice := expr (("\/" | "/\") expr)*          left-associative
//! expr    := term (("+" | "-") term)*
//! term    := factor ("*" factor)*                at most one non-numeric factor
//! factor  := number | atom | "-" factor
//!          | "abs(" lattice ")" | "pos(" lattice ")" | "neg(" lattice ")"
//!          | "(" lattice ")"
//! atom    := "d(e" integer ")" | "d([" number ("," number)* "])"
//! ```
//!
//! Whitespace is ignored between tokens. The dimension of the result is
//! inferred from the atoms unless it is supplied by the caller.

use super::{LatticeExpr, Node};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    Join,
    Meet,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::LBracket => "\"[\"".into(),
            Tok::RBracket => "\"]\"".into(),
            Tok::Comma => "\",\"".into(),
            Tok::Plus => "\"+\"".into(),
            Tok::Minus => "\"-\"".into(),
            Tok::Star => "\"*\"".into(),
            Tok::Join => "\"\\/\"".into(),
            Tok::Meet => "\"/\\\"".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(pos: Pos, expected: impl Into<String>, found: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        expected: expected.into(),
        found: found.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '\\' if chars.get(i + 1) == Some(&'/') => {
                i += 1;
                Tok::Join
            }
            '/' if chars.get(i + 1) == Some(&'\\') => {
                i += 1;
                Tok::Meet
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                    j += 1;
                }
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let s: String = chars[i..j].iter().collect();
                let v: f64 = s.parse().map_err(|_| err(pos, "a number", format!("{s:?}")))?;
                i = j - 1;
                Tok::Num(v)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                i = j - 1;
                Tok::Ident(s)
            }
            other => return Err(err(pos, "a token", format!("character {other:?}"))),
        };
        i += 1;
        column += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

/// Syntax tree before the dimension is fixed.
enum Ast {
    Basis { index: usize, pos: Pos },
    Dense { values: Vec<f64>, pos: Pos },
    Scale(f64, Box<Ast>),
    Sum(Box<Ast>, Box<Ast>),
    Join(Box<Ast>, Box<Ast>),
    Meet(Box<Ast>, Box<Ast>),
    Abs(Box<Ast>),
    Pos(Box<Ast>),
    Neg(Box<Ast>),
}

enum Factor {
    Num(f64),
    Lattice(Ast),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(err(self.pos(), want.describe(), self.peek().describe()))
        }
    }

    fn lattice(&mut self) -> Result<Ast> {
        let mut acc = self.expr()?;
        loop {
            match self.peek() {
                Tok::Join => {
                    self.bump();
                    acc = Ast::Join(Box::new(acc), Box::new(self.expr()?));
                }
                Tok::Meet => {
                    self.bump();
                    acc = Ast::Meet(Box::new(acc), Box::new(self.expr()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Ast::Sum(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Ast::Sum(Box::new(acc), Box::new(Ast::Scale(-1.0, Box::new(rhs))));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let start = self.pos();
        let mut coefficient: Option<f64> = None;
        let mut body: Option<Ast> = None;
        loop {
            let here = self.pos();
            match self.factor()? {
                Factor::Num(v) => coefficient = Some(coefficient.unwrap_or(1.0) * v),
                Factor::Lattice(a) => {
                    if body.is_some() {
                        return Err(err(
                            here,
                            "a numeric factor (a term may contain only one lattice factor)",
                            "a second lattice factor",
                        ));
                    }
                    body = Some(a);
                }
            }
            if *self.peek() == Tok::Star {
                self.bump();
            } else {
                break;
            }
        }
        match (coefficient, body) {
            (None, Some(a)) => Ok(a),
            (Some(c), Some(a)) => Ok(Ast::Scale(c, Box::new(a))),
            (_, None) => Err(err(
                start,
                "a lattice term (constants are not positively homogeneous)",
                "a purely numeric term",
            )),
        }
    }

    fn factor(&mut self) -> Result<Factor> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Factor::Num(v)),
            Tok::Minus => Ok(match self.factor()? {
                Factor::Num(v) => Factor::Num(-v),
                Factor::Lattice(a) => Factor::Lattice(Ast::Scale(-1.0, Box::new(a))),
            }),
            Tok::LParen => {
                let inner = self.lattice()?;
                self.expect(Tok::RParen)?;
                Ok(Factor::Lattice(inner))
            }
            Tok::Ident(name) => match name.as_str() {
                "abs" | "pos" | "neg" => {
                    self.expect(Tok::LParen)?;
                    let inner = Box::new(self.lattice()?);
                    self.expect(Tok::RParen)?;
                    Ok(Factor::Lattice(match name.as_str() {
                        "abs" => Ast::Abs(inner),
                        "pos" => Ast::Pos(inner),
                        _ => Ast::Neg(inner),
                    }))
                }
                "d" => self.atom(pos).map(Factor::Lattice),
                _ => Err(err(
                    pos,
                    "a number, \"d(\", \"abs(\", \"pos(\", \"neg(\" or \"(\"",
                    format!("identifier {name:?}"),
                )),
            },
            other => Err(err(
                pos,
                "a number, \"d(\", \"abs(\", \"pos(\", \"neg(\" or \"(\"",
                other.describe(),
            )),
        }
    }

    fn atom(&mut self, pos: Pos) -> Result<Ast> {
        self.expect(Tok::LParen)?;
        let (tok, at) = self.bump();
        let ast = match tok {
            Tok::Ident(ref s) if s.starts_with('e') && s.len() > 1 => {
                let index: usize = s[1..]
                    .parse()
                    .map_err(|_| err(at, "a basis vector e<integer>", format!("{s:?}")))?;
                if index == 0 {
                    return Err(err(at, "a basis index of at least 1", "e0"));
                }
                Ast::Basis { index, pos }
            }
            Tok::LBracket => {
                let mut values = vec![self.number()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    values.push(self.number()?);
                }
                self.expect(Tok::RBracket)?;
                Ast::Dense { values, pos }
            }
            other => {
                return Err(err(at, "a basis vector e<integer> or \"[\"", other.describe()));
            }
        };
        self.expect(Tok::RParen)?;
        Ok(ast)
    }

    fn number(&mut self) -> Result<f64> {
        let mut sign = 1.0;
        if *self.peek() == Tok::Minus {
            self.bump();
            sign = -1.0;
        }
        match self.bump() {
            (Tok::Num(v), _) => Ok(sign * v),
            (other, pos) => Err(err(pos, "a number", other.describe())),
        }
    }
}

fn inferred_dim(ast: &Ast, dense: &mut Option<(usize, Pos)>, basis_max: &mut usize) -> Result<()> {
    match ast {
        Ast::Basis { index, .. } => *basis_max = (*basis_max).max(*index),
        Ast::Dense { values, pos } => match dense {
            Some((n, _)) if *n != values.len() => {
                return Err(err(
                    *pos,
                    format!("a vector of length {n} (matching earlier atoms)"),
                    format!("a vector of length {}", values.len()),
                ));
            }
            Some(_) => {}
            None => *dense = Some((values.len(), *pos)),
        },
        Ast::Scale(_, a) | Ast::Abs(a) | Ast::Pos(a) | Ast::Neg(a) => {
            inferred_dim(a, dense, basis_max)?
        }
        Ast::Sum(a, b) | Ast::Join(a, b) | Ast::Meet(a, b) => {
            inferred_dim(a, dense, basis_max)?;
            inferred_dim(b, dense, basis_max)?;
        }
    }
    Ok(())
}

fn lower(ast: Ast, n: usize) -> Result<Node> {
    let bx = |a: Ast| -> Result<Box<Node>> { lower(a, n).map(Box::new) };
    Ok(match ast {
        Ast::Basis { index, pos } => {
            if index > n {
                return Err(err(
                    pos,
                    format!("a basis index at most {n}"),
                    format!("e{index}"),
                ));
            }
            let mut x = vec![0.0; n];
            x[index - 1] = 1.0;
            Node::Atom(x)
        }
        Ast::Dense { values, pos } => {
            if values.len() != n {
                return Err(err(
                    pos,
                    format!("a vector of length {n}"),
                    format!("a vector of length {}", values.len()),
                ));
            }
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(err(pos, "finite coordinates", format!("{v}")));
            }
            Node::Atom(values)
        }
        Ast::Scale(c, a) => Node::Scale(c, bx(*a)?),
        Ast::Sum(a, b) => Node::Sum(bx(*a)?, bx(*b)?),
        Ast::Join(a, b) => Node::Join(bx(*a)?, bx(*b)?),
        Ast::Meet(a, b) => Node::Meet(bx(*a)?, bx(*b)?),
        Ast::Abs(a) => Node::Abs(bx(*a)?),
        Ast::Pos(a) => Node::Join(bx(*a)?, Box::new(Node::Atom(vec![0.0; n]))),
        Ast::Neg(a) => Node::Join(
            Box::new(Node::Scale(-1.0, bx(*a)?)),
            Box::new(Node::Atom(vec![0.0; n])),
        ),
    })
}

fn parse_ast(text: &str) -> Result<Ast> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let ast = p.lattice()?;
    if *p.peek() != Tok::Eof {
        return Err(err(
            p.pos(),
            "an operator or end of input",
            p.peek().describe(),
        ));
    }
    Ok(ast)
}

/// Parses an expression, inferring the dimension from its atoms: the common
/// length of explicit vectors, or else the largest basis index.
pub fn parse(text: &str) -> Result<LatticeExpr> {
    let ast = parse_ast(text)?;
    let (mut dense, mut basis_max) = (None, 0);
    inferred_dim(&ast, &mut dense, &mut basis_max)?;
    let n = dense.map(|(n, _)| n).unwrap_or(basis_max);
    let root = lower(ast, n)?;
    Ok(LatticeExpr::from_parts(n, root))
}

/// Parses an expression in a fixed dimension `n`.
pub fn parse_with_dim(text: &str, n: usize) -> Result<LatticeExpr> {
    if n == 0 {
        return Err(Error::InvalidValue("dimension must be at least 1".into()));
    }
    let ast = parse_ast(text)?;
    let root = lower(ast, n)?;
    Ok(LatticeExpr::from_parts(n, root))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, n: usize) -> LatticeExpr {
        LatticeExpr::generator(i, n).unwrap()
    }

    #[test]
    fn grammar_examples() {
        let f = parse("abs(d(e1)) + 2*abs(d(e2))").unwrap();
        let want = e(1, 2).abs().add(e(2, 2).abs().scale(2.0).unwrap()).unwrap();
        assert_eq!(f, want);

        let g = parse("d([1,0,2]) \\/ d(e2)").unwrap();
        let want = LatticeExpr::atom(vec![1.0, 0.0, 2.0])
            .unwrap()
            .join(e(2, 3))
            .unwrap();
        assert_eq!(g, want);
    }

    #[test]
    fn syntax_error_at_end_of_input() {
        match parse("abs(d(e1)").unwrap_err() {
            Error::Parse {
                line,
                column,
                expected,
                found,
            } => {
                assert_eq!((line, column), (1, 10));
                assert!(expected.contains(')'));
                assert_eq!(found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        // join binds loosest: a + b \/ c = (a + b) \/ c
        let f = parse("d(e1) + d(e2) \\/ d(e3)").unwrap();
        assert_eq!(f.evaluate(&[1.0, 1.0, 3.0]).unwrap(), 3.0);
        assert_eq!(f.evaluate(&[2.0, 2.0, 3.0]).unwrap(), 4.0);
        // left associative mixing of join and meet
        let g = parse("d(e1) \\/ d(e2) /\\ d(e3)").unwrap();
        assert_eq!(g.evaluate(&[1.0, 5.0, 2.0]).unwrap(), 2.0);
        let h = parse("d(e1) - d(e2) - d(e3)").unwrap();
        assert_eq!(h.evaluate(&[1.0, 2.0, 3.0]).unwrap(), -4.0);
        let k = parse("-2 * 3 * pos(d(e1)) + neg(d(e1))").unwrap();
        assert_eq!(k.evaluate(&[-1.5]).unwrap(), 1.5);
        assert_eq!(k.evaluate(&[1.0]).unwrap(), -6.0);
    }

    #[test]
    fn numbers_and_whitespace() {
        let f = parse(" 1.5e1 *\n abs( d( [ -1 , 2.5e-1 ] ) ) ").unwrap();
        assert_eq!(f.evaluate(&[1.0, 4.0]).unwrap(), 0.0);
        assert_eq!(f.evaluate(&[2.0, 0.0]).unwrap(), 30.0);
    }

    #[test]
    fn rejected_inputs() {
        assert!(matches!(parse("2 + d(e1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("d(e1) * d(e2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("d(e0)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("foo(d(e1))"), Err(Error::Parse { .. })));
        assert!(matches!(parse("d(e1) d(e2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
        // inconsistent explicit vectors
        match parse("d([1,2]) + d([1,2,3])").unwrap_err() {
            Error::Parse { column, .. } => assert_eq!(column, 12),
            other => panic!("unexpected {other:?}"),
        }
        // basis index beyond an explicit vector's length
        assert!(parse("d([1,2]) + d(e3)").is_err());
        match parse("abs(d(e1))\n  + $").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (2, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fixed_dimension() {
        let f = parse_with_dim("abs(d(e1))", 2).unwrap();
        assert_eq!(f.dim(), 2);
        assert_eq!(f.evaluate(&[-3.0, 0.0]).unwrap(), 3.0);
        assert!(parse_with_dim("d(e3)", 2).is_err());
        assert!(parse_with_dim("d([1,2,3])", 2).is_err());
    }
}
