use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use fblnorm::bounds::{certify_moduli_norm, walsh_matrix, GrothendieckConstant};
use fblnorm::engine::{lower_bound_sweep, optimize_family, OptimizerConfig};
use fblnorm::experiments::{run_scan, verify, write_csv, ExperimentSpec, Tolerances, VerifyOptions};
use fblnorm::expr::{parse, parse_with_dim};
use fblnorm::space::{Exponent, SpaceSpec};
use fblnorm::{Error, LatticeExpr};

const THREADS_ENV: &str = "FBLNORM_THREADS";
const ENUM_CAP_ENV: &str = "FBLNORM_ENUM_CAP";

/// Free Banach lattice norms over finite-dimensional l_p and c_0.
#[derive(Parser)]
#[command(name = "fblnorm", version)]
struct Cli {
    /// Worker threads (default: FBLNORM_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression at a point of the dual space.
    Eval {
        expr: String,
        /// The point, e.g. "[1,-2]".
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Lower and upper bounds for a norm.
    Bound(BoundArgs),
    /// Run a parameter scan described by a TOML file and write CSV.
    Scan {
        spec: PathBuf,
        /// Record per-cell wall time in the ms column.
        #[arg(long)]
        timing: bool,
        /// Prepend a "# generated ..." comment line.
        #[arg(long)]
        timestamp: bool,
        /// Output file (overrides the spec; default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Sylvester-Walsh matrix of size 2^k as CSV.
    Walsh { k: u32 },
    /// Run the verification suites and emit a JSON report.
    VerifyPaper(VerifyArgs),
}

#[derive(Args)]
struct BoundArgs {
    /// Coefficients of the combination of moduli of the generators, e.g. "1,2,3".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "expr")]
    lambda: Option<String>,
    /// An arbitrary lattice expression.
    #[arg(long, required_unless_present = "lambda")]
    expr: Option<String>,
    /// Exponent of the underlying space: a number >= 1 or "inf".
    #[arg(long)]
    p: Exponent,
    /// Dimension (default: inferred from the input).
    #[arg(long)]
    n: Option<usize>,
    /// Run the optimizer over families of this size.
    #[arg(long, conflicts_with = "sweep")]
    family_size: Option<usize>,
    /// Run the optimizer for every family size 1..=M and print all estimates.
    #[arg(long)]
    sweep: Option<usize>,
    /// Value of the Grothendieck constant used in upper bounds.
    #[arg(long)]
    kg: Option<f64>,
    /// Optimizer settings as TOML; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    initial_step: Option<f64>,
    #[arg(long)]
    step_decay: Option<f64>,
    /// Largest number of free sign bits enumerated exactly (default: FBLNORM_ENUM_CAP, then 24).
    #[arg(long)]
    enum_cap: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Run only this suite; repeatable.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Value of the Grothendieck constant the bounds are checked against.
    #[arg(long)]
    kg: Option<f64>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include the generation time in the report.
    #[arg(long)]
    timestamp: bool,
    #[arg(long)]
    tol_bound: Option<f64>,
    #[arg(long)]
    tol_identity: Option<f64>,
    #[arg(long)]
    tol_feasibility: Option<f64>,
}

enum Failure {
    Lib(Error),
    Input(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult = Result<(), Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn parse_vector(text: &str) -> Result<Vec<f64>, Failure> {
    let t = text.trim();
    let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).unwrap_or(t);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| input(format!("cannot parse {v:?} as a finite number in {text:?}")))
        })
        .collect()
}

fn env_usize(name: &str) -> Result<Option<usize>, Failure> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| input(format!("{name}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(None),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| input(format!("cannot write to stdout: {e}")))
        }
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("output serializes") + "\n"
}

fn eval(expr: &str, at: &str) -> CliResult {
    // the point fixes the dimension; generators may index any coordinate of it
    let x = parse_vector(at)?;
    let f = if x.is_empty() { parse(expr)? } else { parse_with_dim(expr, x.len())? };
    println!("{}", f.evaluate(&x)?);
    Ok(())
}

fn optimizer_config(a: &BoundArgs) -> Result<OptimizerConfig, Failure> {
    let mut cfg = match &a.config {
        Some(path) => toml::from_str(&read(path)?)
            .map_err(|e| input(format!("{}: {e}", path.display())))?,
        None => OptimizerConfig::default(),
    };
    if let Some(cap) = env_usize(ENUM_CAP_ENV)? {
        cfg.enumeration_cap = cap;
    }
    macro_rules! set {
        ($($field:ident),*) => { $(if let Some(v) = a.$field { cfg.$field = v; })* };
    }
    set!(seed, restarts, iterations, initial_step, step_decay, samples, kg);
    if let Some(v) = a.enum_cap {
        cfg.enumeration_cap = v;
    }
    cfg.validate().map_err(|e| input(e.to_string()))?;
    Ok(cfg)
}

fn bound(a: &BoundArgs) -> CliResult {
    let cfg = optimizer_config(a)?;
    let (f, lambda) = match (&a.lambda, &a.expr) {
        (Some(l), _) => {
            let lambda = parse_vector(l)?;
            if lambda.is_empty() {
                return Err(input("--lambda needs at least one coefficient"));
            }
            let n = a.n.unwrap_or(lambda.len());
            (LatticeExpr::moduli_combination_in(&lambda, n)?, Some(lambda))
        }
        (None, Some(text)) => match a.n {
            Some(n) => (parse_with_dim(text, n)?, None),
            None => (parse(text)?, None),
        },
        (None, None) => unreachable!("clap requires one of --lambda and --expr"),
    };
    let space = SpaceSpec::new(f.dim(), a.p)?;
    if let Some(m_max) = a.sweep {
        let sweep = lower_bound_sweep(&f, space, m_max, &cfg)?;
        return emit(&to_json(&sweep), None);
    }
    match (a.family_size, lambda) {
        (None, Some(lambda)) => {
            let kg = GrothendieckConstant::new(cfg.kg)?;
            let cert = certify_moduli_norm(&lambda, space, kg, cfg.enumeration_cap)?;
            emit(&to_json(&cert), None)
        }
        (m, _) => {
            let est = optimize_family(&f, space, m.unwrap_or(space.n), &cfg)?;
            emit(&to_json(&est), None)
        }
    }
}

fn scan(spec_path: &Path, timing: bool, timestamp: bool, out: Option<&Path>) -> CliResult {
    let text = read(spec_path)?;
    let spec = ExperimentSpec::from_toml(&text).map_err(|e| input(format!("{}: {e}", spec_path.display())))?;
    let rows = run_scan(&spec, timing)?;
    let comment = timestamp.then(|| format!("generated unix={}", unix_now()));
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows, comment.as_deref())?;
    let text = String::from_utf8(buf).expect("csv is utf-8");
    emit(&text, out.or(spec.output.as_deref()))
}

fn walsh(k: u32) -> CliResult {
    emit(&walsh_matrix(k)?.to_csv(), None)
}

fn verify_paper(a: &VerifyArgs) -> CliResult {
    let defaults = Tolerances::default();
    let opts = VerifyOptions {
        seed: a.seed,
        kg: a.kg.unwrap_or(GrothendieckConstant::KRIVINE.value()),
        suites: (!a.suites.is_empty()).then(|| a.suites.clone()),
        tolerances: Tolerances {
            bound: a.tol_bound.unwrap_or(defaults.bound),
            identity: a.tol_identity.unwrap_or(defaults.identity),
            feasibility: a.tol_feasibility.unwrap_or(defaults.feasibility),
        },
    };
    let mut report = verify(&opts)?;
    if a.timestamp {
        report.timestamp = Some(unix_now());
    }
    emit(&report.to_json(), a.out.as_deref())?;
    for s in &report.suites {
        eprintln!(
            "{:<20} {} ({} checks, {} failed)",
            s.name,
            if s.passed { "pass" } else { "FAIL" },
            s.checks,
            s.failed
        );
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> CliResult {
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => env_usize(THREADS_ENV)?,
    };
    if let Some(t) = threads.filter(|&t| t > 0) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| input(format!("cannot start {t} worker threads: {e}")))?;
    }
    match &cli.command {
        Command::Eval { expr, at } => eval(expr, at),
        Command::Bound(a) => bound(a),
        Command::Scan {
            spec,
            timing,
            timestamp,
            out,
        } => scan(spec, *timing, *timestamp, out.as_deref()),
        Command::Walsh { k } => walsh(*k),
        Command::VerifyPaper(a) => verify_paper(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_capacity_or_domain() { 3 } else { 2 })
        }
    }
}
