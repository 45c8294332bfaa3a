use rand::Rng;

use crate::expr::{parse, LatticeExpr};

/// Hand-written expressions exercising every grammar production.
pub const HANDWRITTEN: [&str; 14] = [
    "d(e1)",
    "abs(d(e1))",
    "abs(d(e1)) + 2*abs(d(e2))",
    "d([1,0,2]) \\/ d(e2)",
    "d(e1) /\\ d(e2) /\\ d(e3)",
    "pos(d(e1)) - neg(d(e2))",
    "neg(d([0.5,-1.5]))",
    "-abs(d(e2)) + 3 * d(e1)",
    "(d(e1) \\/ -d(e1)) + 0.25*d(e2)",
    "abs(d(e1) - d(e2)) \\/ abs(d(e1) + d(e2))",
    "2*(d(e1) /\\ d(e2)) - (d(e3) \\/ d([0,0,1]))",
    "pos(abs(d(e1)) - 1.5*abs(d(e2))) * 4",
    "d([1e-3,2.5e2,-7])",
    "abs(abs(abs(d(e1))))",
];

/// A random expression over `n` generators with at most `depth` levels of
/// operators below the root.
pub fn random_expr(rng: &mut impl Rng, n: usize, depth: usize) -> LatticeExpr {
    if depth == 0 || rng.random_range(0..4) == 0 {
        return if rng.random::<bool>() {
            LatticeExpr::generator(rng.random_range(1..=n), n).expect("index in range")
        } else {
            let x = (0..n).map(|_| (rng.random_range(-40..=40) as f64) / 8.0).collect();
            LatticeExpr::atom(x).expect("finite entries")
        };
    }
    let sub = |rng: &mut _| random_expr(rng, n, depth - 1);
    match rng.random_range(0..7) {
        0 => sub(rng).scale(rng.random_range(-3.0..3.0)).expect("finite scalar"),
        1 => sub(rng).add(sub(rng)).expect("same dimension"),
        2 => sub(rng).join(sub(rng)).expect("same dimension"),
        3 => sub(rng).meet(sub(rng)).expect("same dimension"),
        4 => sub(rng).abs(),
        5 => sub(rng).pos_part(),
        _ => sub(rng).neg_part(),
    }
}

/// The hand-written expressions followed by random ones, `total` in all.
pub fn corpus(rng: &mut impl Rng, total: usize) -> Vec<LatticeExpr> {
    let mut out: Vec<LatticeExpr> = HANDWRITTEN
        .iter()
        .map(|s| parse(s).expect("corpus expression parses"))
        .take(total)
        .collect();
    while out.len() < total {
        let n = rng.random_range(1..=4);
        let depth = rng.random_range(1..=5);
        out.push(random_expr(rng, n, depth));
    }
    out
}
