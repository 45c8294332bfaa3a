//! The verification suites behind `verify-paper`.
//!
//! Every suite is deterministic given the seed: random inputs come from
//! per-suite ChaCha streams, cells run in parallel but are tallied in grid
//! order, and no timing or host data enters the report.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::corpus::{corpus, random_expr};
use super::spec::{random_lambda, SignMode};
use crate::bounds::{certify_moduli_norm, walsh_matrix, walsh_witness, GrothendieckConstant};
use crate::engine::{
    constraint_by_sign_patterns, constraint_l1_closed_form, constraint_norm_exact,
    constraint_norm_heuristic, lower_bound_sweep, objective, optimize_family, optimize_from_seeds,
    sample_constraint_lower, FunctionalFamily, OptimizerConfig,
};
use crate::error::{Error, Result};
use crate::expr::{parse, LatticeExpr};
use crate::space::{ell_r_exponent, norm, Exponent, SpaceSpec};

pub const SUITES: [&str; 9] = [
    "walsh-feasibility",
    "walsh-objective",
    "sandwich",
    "c0",
    "ell1",
    "symmetry",
    "krivine-consistency",
    "oracle-equivalence",
    "structural",
];

const FINITE_P: [f64; 4] = [2.5, 3.0, 4.0, 10.0];
const SIZES: [usize; 4] = [2, 4, 8, 16];
const LAMBDAS_PER_CELL: usize = 20;
const ADVERSARIAL_RUNS: usize = 1000;
const MAX_REPORTED_FAILURES: usize = 20;

/// Tolerances pinned by the acceptance criteria; overridable from the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bound comparisons (`lower >= ‖λ‖_r - t`, `lower <= K_G ‖λ‖_r + t`, ...).
    pub bound: f64,
    /// Relative tolerance on closed-form identities.
    pub identity: f64,
    /// Slack on `constraint <= 1`.
    pub feasibility: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            bound: 1e-9,
            identity: 1e-12,
            feasibility: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub kg: f64,
    /// Suite names to run; all when `None`.
    pub suites: Option<Vec<String>>,
    pub tolerances: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 42,
            kg: GrothendieckConstant::KRIVINE.value(),
            suites: None,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub failed: usize,
    /// Smallest margin by which a check passed (negative when one failed).
    pub worst_slack: Option<f64>,
    pub summary: BTreeMap<String, Value>,
    /// Full inputs of the first failing cells.
    pub failures: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    /// Seconds since the Unix epoch; absent unless the caller stamps it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub seed: u64,
    pub kg: f64,
    pub tolerances: Tolerances,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

struct Tally {
    name: &'static str,
    checks: usize,
    failed: usize,
    worst: Option<f64>,
    failures: Vec<Value>,
    summary: BTreeMap<String, Value>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checks: 0,
            failed: 0,
            worst: None,
            failures: Vec::new(),
            summary: BTreeMap::new(),
        }
    }

    /// Records a check whose margin is `slack`; it passes iff `slack >= 0`.
    fn check(&mut self, slack: f64, cell: impl FnOnce() -> Value) {
        self.checks += 1;
        let slack = if slack.is_nan() { f64::NEG_INFINITY } else { slack };
        self.worst = Some(self.worst.map_or(slack, |w| w.min(slack)));
        if slack < 0.0 {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED_FAILURES {
                let mut v = cell();
                v["slack"] = json!(slack);
                self.failures.push(v);
            }
        }
    }

    /// Records a check that must hold exactly.
    fn exact(&mut self, ok: bool, cell: impl FnOnce() -> Value) {
        self.check(if ok { 0.0 } else { -1.0 }, cell);
    }

    fn note(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name.to_string(),
            passed: self.failed == 0,
            checks: self.checks,
            failed: self.failed,
            worst_slack: self.worst.filter(|w| w.is_finite()),
            summary: self.summary,
            failures: self.failures,
        }
    }
}

fn rng_for(seed: u64, suite: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ suite.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(stream);
    rng
}

fn p_json(p: Exponent) -> Value {
    serde_json::to_value(p).expect("exponent serializes")
}

/// One walsh grid cell: `λ` is shared by every `p` with the same `m` and index.
#[derive(Clone)]
struct GridCell {
    p: Exponent,
    m: usize,
    index: usize,
    lambda: Vec<f64>,
}

fn grid(seed: u64, ps: &[Exponent], signs: SignMode) -> Vec<GridCell> {
    let mut cells = Vec::new();
    for &m in &SIZES {
        let mut rng = rng_for(seed, 1 + signs as u64, m as u64);
        let lambdas: Vec<Vec<f64>> = (0..LAMBDAS_PER_CELL).map(|_| random_lambda(&mut rng, m, signs)).collect();
        for &p in ps {
            for (index, lambda) in lambdas.iter().enumerate() {
                cells.push(GridCell {
                    p,
                    m,
                    index,
                    lambda: lambda.clone(),
                });
            }
        }
    }
    cells
}

fn cell_json(c: &GridCell) -> Value {
    json!({"p": p_json(c.p), "m": c.m, "index": c.index, "lambda": c.lambda})
}

fn r_norm(lambda: &[f64], p: Exponent) -> f64 {
    norm(lambda, Exponent::Finite(ell_r_exponent(p).expect("p > 2")))
}

/// A certified optimizer lower bound with its inputs, kept for the
/// consistency suite.
#[derive(Clone)]
struct Observed {
    p: Exponent,
    lambda: Vec<f64>,
    family_size: usize,
    seed: u64,
    lower: f64,
    certified: bool,
}

struct Ctx {
    opts: VerifyOptions,
    kg: GrothendieckConstant,
    sandwich_finite: OnceLock<Result<Vec<Observed>>>,
    sandwich_c0: OnceLock<Result<Vec<Observed>>>,
}

impl Ctx {
    fn tol(&self) -> Tolerances {
        self.opts.tolerances
    }

    fn cap(&self) -> usize {
        crate::engine::DEFAULT_ENUMERATION_CAP
    }

    fn sandwich_runs(&self, ps: &[Exponent]) -> Result<Vec<Observed>> {
        let cells = grid(self.opts.seed, ps, SignMode::Global);
        cells
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let seed = self.opts.seed.wrapping_add(1000 + i as u64);
                let cfg = OptimizerConfig {
                    seed,
                    kg: self.kg.value(),
                    ..OptimizerConfig::default()
                };
                let f = LatticeExpr::moduli_combination(&c.lambda)?;
                let est = optimize_family(&f, SpaceSpec::new(c.m, c.p)?, c.m, &cfg)?;
                Ok(Observed {
                    p: c.p,
                    lambda: c.lambda.clone(),
                    family_size: c.m,
                    seed,
                    lower: est.lower,
                    certified: est.certified,
                })
            })
            .collect()
    }

    fn sandwich(&self, c0: bool) -> Result<&Vec<Observed>> {
        let (lock, ps) = if c0 {
            (&self.sandwich_c0, vec![Exponent::Infinite])
        } else {
            (&self.sandwich_finite, FINITE_P.iter().map(|&p| Exponent::Finite(p)).collect())
        };
        lock.get_or_init(|| self.sandwich_runs(&ps)).as_ref().map_err(Clone::clone)
    }
}

fn observed_json(o: &Observed) -> Value {
    json!({"p": p_json(o.p), "lambda": o.lambda, "family_size": o.family_size, "seed": o.seed, "lower": o.lower})
}

fn walsh_feasibility(ctx: &Ctx, t: &mut Tally, ps: &[Exponent]) -> Result<()> {
    let mut worst = 0.0_f64;
    for signs in [SignMode::Global, SignMode::Mixed] {
        let cells = grid(ctx.opts.seed, ps, signs);
        let values: Vec<Result<f64>> = cells
            .par_iter()
            .map(|c| constraint_norm_exact(&walsh_witness(&c.lambda, SpaceSpec::new(c.m, c.p)?)?, ctx.cap()))
            .collect();
        for (c, v) in cells.iter().zip(values) {
            let v = v?;
            worst = worst.max(v);
            t.check(1.0 + ctx.tol().feasibility - v, || {
                json!({"cell": cell_json(c), "signs": signs, "constraint": v})
            });
        }
    }
    t.note("max_constraint", json!(worst));
    Ok(())
}

fn walsh_objective(ctx: &Ctx, t: &mut Tally, ps: &[Exponent]) -> Result<()> {
    let tol = ctx.tol().identity;
    for c in grid(ctx.opts.seed, ps, SignMode::Global) {
        let space = SpaceSpec::new(c.m, c.p)?;
        let f = LatticeExpr::moduli_combination(&c.lambda)?;
        let obj = objective(&f, &walsh_witness(&c.lambda, space)?)?;
        let target = r_norm(&c.lambda, c.p);
        t.check(tol * (1.0 + target) - (obj - target).abs(), || {
            json!({"cell": cell_json(&c), "objective": obj, "r_norm": target})
        });
        // zero padding to twice the length leaves the value unchanged
        let mut padded = c.lambda.clone();
        padded.resize(2 * c.m, 0.0);
        let wide = SpaceSpec::new(2 * c.m, c.p)?;
        let g = LatticeExpr::moduli_combination(&padded)?;
        let obj_padded = objective(&g, &walsh_witness(&padded, wide)?)?;
        let target_padded = r_norm(&padded, c.p);
        t.check(tol * (1.0 + target) - (obj_padded - obj).abs().max((target_padded - target).abs()), || {
            json!({"cell": cell_json(&c), "padded_objective": obj_padded, "objective": obj})
        });
    }
    Ok(())
}

fn sandwich_checks(ctx: &Ctx, t: &mut Tally, c0: bool) -> Result<()> {
    let tol = ctx.tol().bound;
    let mut worst_ratio = 0.0_f64;
    let mut best_ratio = f64::INFINITY;
    for o in ctx.sandwich(c0)? {
        let target = r_norm(&o.lambda, o.p);
        let upper = ctx.kg.value() * target;
        worst_ratio = worst_ratio.max(o.lower / target);
        best_ratio = best_ratio.min(o.lower / target);
        t.check(o.lower - (target - tol), || json!({"run": observed_json(o), "r_norm": target, "side": "lower"}));
        t.check(upper + tol - o.lower, || json!({"run": observed_json(o), "upper": upper, "side": "upper"}));
        t.exact(o.certified, || json!({"run": observed_json(o), "side": "certified"}));
    }
    t.note("max_lower_over_r_norm", json!(worst_ratio));
    t.note("min_lower_over_r_norm", json!(best_ratio));
    Ok(())
}

fn ell1(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let tol = ctx.tol().bound;
    let mut rng = rng_for(ctx.opts.seed, 5, 0);
    for p in [1.0, 1.5, 2.0] {
        let top = if p == 1.0 { 16 } else { 4 };
        let modes: &[SignMode] = if p == 1.0 { &[SignMode::Global, SignMode::Mixed] } else { &[SignMode::Global] };
        for m in 1..=top {
            for &signs in modes {
                for _ in 0..5 {
                    let lambda = random_lambda(&mut rng, m, signs);
                    let space = SpaceSpec::new(m, Exponent::new(p)?)?;
                    let cert = certify_moduli_norm(&lambda, space, ctx.kg, ctx.cap())?;
                    let l1 = norm(&lambda, Exponent::ONE);
                    let cell = || json!({"p": p, "lambda": lambda, "lower": cert.lower, "upper": cert.upper});
                    t.check(tol * (1.0 + l1) - (cert.lower - l1).abs(), cell);
                    t.check(tol * (1.0 + l1) - (cert.upper - l1).abs(), cell);
                    t.exact(cert.certified, cell);
                }
            }
        }
        // the optimizer can neither lose the witness nor pass the triangle bound
        for m in 1..=3 {
            for k in 0..3 {
                let lambda = random_lambda(&mut rng, m, SignMode::Global);
                let space = SpaceSpec::new(m, Exponent::new(p)?)?;
                let cfg = OptimizerConfig {
                    seed: ctx.opts.seed.wrapping_add(k),
                    restarts: 4,
                    kg: ctx.kg.value(),
                    ..OptimizerConfig::default()
                };
                let est = optimize_family(&LatticeExpr::moduli_combination(&lambda)?, space, 1 << m, &cfg)?;
                let l1 = norm(&lambda, Exponent::ONE);
                t.check(tol * (1.0 + l1) - (est.lower - l1).abs(), || {
                    json!({"p": p, "lambda": lambda, "family_size": 1 << m, "seed": cfg.seed, "lower": est.lower})
                });
            }
        }
    }
    Ok(())
}

fn gaussian_family(rng: &mut impl Rng, space: SpaceSpec, m: usize) -> Result<FunctionalFamily> {
    let data = (0..m * space.n).map(|_| rng.sample(StandardNormal)).collect();
    FunctionalFamily::from_flat(space, m, data)
}

const EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

fn symmetry(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let mut rng = rng_for(ctx.opts.seed, 6, 0);
    let small = OptimizerConfig {
        restarts: 0,
        iterations: 200,
        kg: ctx.kg.value(),
        ..OptimizerConfig::default()
    };
    for case in 0..100 {
        let n = rng.random_range(1..=4);
        let m = rng.random_range(1..=8);
        let p = Exponent::new(EXPONENTS[case % EXPONENTS.len()])?;
        let space = SpaceSpec::new(n, p)?;
        let lambda = random_lambda(&mut rng, n, SignMode::Mixed);
        let family = gaussian_family(&mut rng, space, m)?;
        let mirrored = family.negate();

        let mut pos: Option<LatticeExpr> = None;
        let mut neg: Option<LatticeExpr> = None;
        for (i, l) in lambda.iter().enumerate() {
            let e = LatticeExpr::generator(i + 1, n)?;
            let a = e.clone().pos_part().scale(*l)?;
            let b = e.neg_part().scale(*l)?;
            pos = Some(match pos {
                Some(acc) => acc.add(a)?,
                None => a,
            });
            neg = Some(match neg {
                Some(acc) => acc.add(b)?,
                None => b,
            });
        }
        let (pos, neg) = (pos.expect("n >= 1"), neg.expect("n >= 1"));
        let cell = || json!({"case": case, "p": p_json(p), "lambda": lambda, "family": family});
        let (a, b) = (objective(&pos, &family)?, objective(&neg, &mirrored)?);
        t.exact(a == b, cell);
        let (c, d) = (constraint_norm_exact(&family, ctx.cap())?, constraint_norm_exact(&mirrored, ctx.cap())?);
        t.exact(c == d, cell);

        if case % 5 == 0 {
            let cfg = OptimizerConfig {
                seed: ctx.opts.seed.wrapping_add(case as u64),
                ..small
            };
            let seeds = vec![family.clone(), gaussian_family(&mut rng, space, m)?];
            let mirrored_seeds: Vec<_> = seeds.iter().map(FunctionalFamily::negate).collect();
            let i = rng.random_range(1..=n);
            let generator = LatticeExpr::generator(i, n)?;
            for (f, g) in [(pos.clone(), neg.clone()), (generator.clone().pos_part(), generator.neg_part())] {
                let x = optimize_from_seeds(&f, &seeds, &cfg)?.lower;
                let y = optimize_from_seeds(&g, &mirrored_seeds, &cfg)?.lower;
                t.check(1e-12 * (1.0 + x.abs()) - (x - y).abs(), || {
                    json!({"case": case, "p": p_json(p), "expr": f.to_string(), "seed": cfg.seed, "pos": x, "neg": y})
                });
            }
        }
    }
    Ok(())
}

fn krivine_consistency(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let tol = ctx.tol().bound;
    let kg = ctx.kg.value();
    let mut max_ratio = 0.0_f64;
    for c0 in [false, true] {
        for o in ctx.sandwich(c0)? {
            let upper = kg * r_norm(&o.lambda, o.p);
            max_ratio = max_ratio.max(o.lower / r_norm(&o.lambda, o.p));
            t.check(upper + tol - o.lower, || json!({"source": "sandwich", "run": observed_json(o), "upper": upper}));
        }
    }
    let ps: Vec<Exponent> = FINITE_P
        .iter()
        .map(|&p| Exponent::Finite(p))
        .chain([Exponent::Infinite])
        .collect();
    let runs: Vec<Result<(Observed, f64)>> = (0..ADVERSARIAL_RUNS)
        .into_par_iter()
        .map(|run| {
            let mut rng = rng_for(ctx.opts.seed, 7, run as u64);
            let p = ps[rng.random_range(0..ps.len())];
            let m = rng.random_range(1..=6);
            let signs = if rng.random::<bool>() { SignMode::Mixed } else { SignMode::Global };
            let lambda = random_lambda(&mut rng, m, signs);
            let family_size = rng.random_range(1..=8);
            let cfg = OptimizerConfig {
                seed: rng.random(),
                restarts: 2,
                iterations: 400,
                initial_step: 2.0,
                step_decay: 0.995,
                kg,
                ..OptimizerConfig::default()
            };
            let space = SpaceSpec::new(m, p)?;
            let est = optimize_family(&LatticeExpr::moduli_combination(&lambda)?, space, family_size, &cfg)?;
            let cert = certify_moduli_norm(&lambda, space, ctx.kg, ctx.cap())?;
            let observed = Observed {
                p,
                lambda,
                family_size,
                seed: cfg.seed,
                lower: est.lower,
                certified: est.certified,
            };
            Ok((observed, cert.lower))
        })
        .collect();
    for run in runs {
        let (o, cert_lower) = run?;
        let target = r_norm(&o.lambda, o.p);
        max_ratio = max_ratio.max(o.lower / target);
        t.check(kg * target + tol - o.lower, || json!({"source": "adversarial", "run": observed_json(&o), "upper": kg * target}));
        t.check(kg * target + tol - cert_lower, || json!({"source": "certificate", "run": observed_json(&o), "lower": cert_lower}));
    }
    t.note("max_lower_over_r_norm", json!(max_ratio));
    t.note("adversarial_runs", json!(ADVERSARIAL_RUNS));
    Ok(())
}

fn oracle_equivalence(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let samples = OptimizerConfig::default().samples;
    let cases: Vec<(usize, Exponent, FunctionalFamily)> = {
        let mut rng = rng_for(ctx.opts.seed, 8, 0);
        (0..200)
            .map(|case| {
                let p = Exponent::new(EXPONENTS[case % EXPONENTS.len()])?;
                let n = rng.random_range(1..=4);
                let m = rng.random_range(1..=10);
                Ok((case, p, gaussian_family(&mut rng, SpaceSpec::new(n, p)?, m)?))
            })
            .collect::<Result<_>>()?
    };
    let results: Vec<Result<(f64, f64, f64, Option<(f64, f64)>)>> = cases
        .par_iter()
        .map(|(case, p, family)| {
            let exact = constraint_norm_exact(family, ctx.cap())?;
            let sampled = sample_constraint_lower(family, samples, ctx.opts.seed.wrapping_add(*case as u64));
            let heuristic = constraint_norm_heuristic(family, 4, ctx.opts.seed.wrapping_add(*case as u64));
            let l1 = if *p == Exponent::ONE {
                Some((constraint_l1_closed_form(family), constraint_by_sign_patterns(family, ctx.cap())?))
            } else {
                None
            };
            Ok((exact, sampled, heuristic, l1))
        })
        .collect();
    let mut min_ratio = f64::INFINITY;
    let mut heuristic_hits = 0;
    for ((case, p, family), r) in cases.iter().zip(results) {
        let (exact, sampled, heuristic, l1) = r?;
        let cell = || json!({"case": case, "p": p_json(*p), "family": family, "exact": exact, "sampled": sampled});
        t.check(exact + ctx.tol().feasibility - sampled, cell);
        // the two evaluate the same signed sums in different orders
        t.check(exact + ctx.tol().feasibility * (1.0 + exact) - heuristic, cell);
        if exact > 0.0 {
            min_ratio = min_ratio.min(sampled / exact);
        }
        if heuristic == exact {
            heuristic_hits += 1;
        }
        if let Some((closed, enumerated)) = l1 {
            t.exact(closed == enumerated, || json!({"case": case, "family": family, "closed_form": closed, "enumerated": enumerated}));
        }
    }
    t.note("min_sampled_over_exact", json!(min_ratio));
    t.note("heuristic_exact_fraction", json!(heuristic_hits as f64 / cases.len() as f64));
    t.note("samples", json!(samples));
    Ok(())
}

fn random_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn structural(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let mut rng = rng_for(ctx.opts.seed, 9, 0);

    // positive homogeneity and the lattice identities
    for case in 0..500 {
        let n = rng.random_range(1..=4);
        let f = random_expr(&mut rng, n, 4);
        let g = random_expr(&mut rng, n, 4);
        let x = random_point(&mut rng, n);
        let s: f64 = rng.random_range(0.0..10.0);
        let tx: Vec<f64> = x.iter().map(|v| s * v).collect();
        let (fx, ftx) = (f.evaluate(&x)?, f.evaluate(&tx)?);
        t.check(1e-12 * (1.0 + fx.abs()) * (1.0 + s) - (ftx - s * fx).abs(), || {
            json!({"case": case, "law": "homogeneity", "expr": f.to_string(), "x": x, "t": s})
        });
        let meet = f.clone().meet(g.clone())?.evaluate(&x)?;
        let de_morgan = f.clone().neg().join(g.clone().neg())?.neg().evaluate(&x)?;
        t.exact(meet == de_morgan, || json!({"case": case, "law": "de-morgan", "f": f.to_string(), "g": g.to_string(), "x": x}));
        let abs = f.clone().abs().evaluate(&x)?;
        let join = f.clone().join(f.clone().neg())?.evaluate(&x)?;
        t.exact(abs == join && abs == fx.max(-fx), || json!({"case": case, "law": "abs", "f": f.to_string(), "x": x}));
        let parts = f.clone().pos_part().evaluate(&x)? - f.clone().neg_part().evaluate(&x)?;
        t.check(1e-12 * (1.0 + fx.abs()) - (parts - fx).abs(), || json!({"case": case, "law": "parts", "f": f.to_string(), "x": x}));
    }
    t.exact(LatticeExpr::zero(3)?.evaluate(&[1.0, -2.0, 3.0])? == 0.0, || json!({"law": "zero atom"}));

    // Walsh orthogonality in exact integers
    for k in 0..=10 {
        let w = walsh_matrix(k)?;
        t.exact(w.is_orthogonal(), || json!({"law": "walsh-orthogonality", "k": k}));
    }

    // sweep monotonicity
    let sweep_cfg = OptimizerConfig {
        restarts: 2,
        iterations: 100,
        kg: ctx.kg.value(),
        seed: ctx.opts.seed,
        ..OptimizerConfig::default()
    };
    for (text, p) in [("abs(d(e1)) + abs(d(e2))", 3.0), ("d(e1) \\/ d(e2)", 1.5), ("abs(d(e1) - d(e2)) /\\ abs(d(e1))", f64::INFINITY)] {
        let f = parse(text)?;
        let sweep = lower_bound_sweep(&f, SpaceSpec::new(f.dim(), Exponent::new(p)?)?, 4, &sweep_cfg)?;
        let ok = sweep.windows(2).all(|w| w[1].lower >= w[0].lower);
        t.exact(ok, || json!({"law": "sweep-monotonicity", "expr": text, "p": p, "lowers": sweep.iter().map(|e| e.lower).collect::<Vec<_>>()}));
    }

    // permutation invariance
    for case in 0..50 {
        let n = rng.random_range(2..=4);
        let m = rng.random_range(1..=6);
        let p = Exponent::new(EXPONENTS[case % EXPONENTS.len()])?;
        let space = SpaceSpec::new(n, p)?;
        let family = gaussian_family(&mut rng, space, m)?;
        let lambda = random_lambda(&mut rng, n, SignMode::Mixed);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let mut permuted_lambda = vec![0.0; n];
        for i in 0..n {
            permuted_lambda[perm[i]] = lambda[i];
        }
        let moved = family.permute_coordinates(&perm)?;
        let f = LatticeExpr::moduli_combination(&lambda)?;
        let g = LatticeExpr::moduli_combination(&permuted_lambda)?;
        let close = |a: f64, b: f64| 1e-12 * (1.0 + a.abs().max(b.abs())) - (a - b).abs();
        let (o1, o2) = (objective(&f, &family)?, objective(&g, &moved)?);
        let (c1, c2) = (constraint_norm_exact(&family, ctx.cap())?, constraint_norm_exact(&moved, ctx.cap())?);
        let cell = || json!({"case": case, "law": "permutation", "p": p_json(p), "perm": perm, "lambda": lambda, "family": family});
        t.check(close(o1, o2), cell);
        t.check(close(c1, c2), cell);
        let (b1, b2) = (
            certify_moduli_norm(&lambda, space, ctx.kg, ctx.cap())?,
            certify_moduli_norm(&permuted_lambda, space, ctx.kg, ctx.cap())?,
        );
        t.check(close(b1.lower, b2.lower).min(close(b1.upper, b2.upper)), cell);
    }

    // parser round trip
    let exprs = corpus(&mut rng, 50);
    for (i, f) in exprs.iter().enumerate() {
        let text = f.to_string();
        let back = parse(&text)?;
        let mut same = back.dim() == f.dim();
        for _ in 0..100 {
            let x = random_point(&mut rng, f.dim());
            same &= back.evaluate(&x)? == f.evaluate(&x)?;
        }
        t.exact(same, || json!({"law": "round-trip", "index": i, "text": text}));
    }
    t.note("corpus_size", json!(exprs.len()));
    Ok(())
}

fn run_suite(ctx: &Ctx, name: &'static str) -> Result<SuiteReport> {
    let finite: Vec<Exponent> = FINITE_P.iter().map(|&p| Exponent::Finite(p)).collect();
    let mut t = Tally::new(name);
    match name {
        "walsh-feasibility" => walsh_feasibility(ctx, &mut t, &finite)?,
        "walsh-objective" => walsh_objective(ctx, &mut t, &finite)?,
        "sandwich" => sandwich_checks(ctx, &mut t, false)?,
        "c0" => {
            let inf = [Exponent::Infinite];
            walsh_feasibility(ctx, &mut t, &inf)?;
            walsh_objective(ctx, &mut t, &inf)?;
            sandwich_checks(ctx, &mut t, true)?;
        }
        "ell1" => ell1(ctx, &mut t)?,
        "symmetry" => symmetry(ctx, &mut t)?,
        "krivine-consistency" => krivine_consistency(ctx, &mut t)?,
        "oracle-equivalence" => oracle_equivalence(ctx, &mut t)?,
        "structural" => structural(ctx, &mut t)?,
        _ => unreachable!("suite names are validated"),
    }
    Ok(t.finish())
}

/// Runs the selected suites in their canonical order.
pub fn verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let kg = GrothendieckConstant::new(opts.kg)?;
    let selected: Vec<&'static str> = match &opts.suites {
        None => SUITES.to_vec(),
        Some(names) => {
            for n in names {
                if !SUITES.contains(&n.as_str()) {
                    return Err(Error::Config(format!(
                        "unknown suite {n:?}; available: {}",
                        SUITES.join(", ")
                    )));
                }
            }
            SUITES.iter().copied().filter(|s| names.iter().any(|n| n == s)).collect()
        }
    };
    let ctx = Ctx {
        opts: opts.clone(),
        kg,
        sandwich_finite: OnceLock::new(),
        sandwich_c0: OnceLock::new(),
    };
    let suites = selected.into_iter().map(|s| run_suite(&ctx, s)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        timestamp: None,
        seed: opts.seed,
        kg: opts.kg,
        tolerances: opts.tolerances,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        let opts = VerifyOptions {
            suites: Some(vec!["nope".into()]),
            ..VerifyOptions::default()
        };
        assert!(matches!(verify(&opts), Err(Error::Config(_))));
    }

    #[test]
    fn tally_tracks_worst_slack() {
        let mut t = Tally::new("x");
        t.check(0.5, || json!({}));
        t.check(-0.25, || json!({"cell": 1}));
        t.exact(true, || json!({}));
        let r = t.finish();
        assert!(!r.passed);
        assert_eq!((r.checks, r.failed), (3, 1));
        assert_eq!(r.worst_slack, Some(-0.25));
        assert_eq!(r.failures[0]["cell"], json!(1));
    }

    #[test]
    fn structural_suite_passes() {
        let opts = VerifyOptions {
            suites: Some(vec!["structural".into()]),
            ..VerifyOptions::default()
        };
        let report = verify(&opts).unwrap();
        assert!(report.passed, "{}", report.to_json());
    }
}
