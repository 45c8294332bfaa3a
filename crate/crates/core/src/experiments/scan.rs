use std::time::Instant;

use rayon::prelude::*;

use super::report::{lambda_digest, ReportRow};
use super::spec::ExperimentSpec;
use crate::bounds::{certify_moduli_norm, GrothendieckConstant};
use crate::engine::{optimize_family, OptimizerConfig};
use crate::error::Result;
use crate::expr::LatticeExpr;
use crate::space::{ell_r_exponent, Exponent, SpaceSpec};

struct Cell {
    p: Exponent,
    lambda: Vec<f64>,
    family_size: Option<usize>,
}

fn run_cell(spec: &ExperimentSpec, cell: &Cell, cfg: &OptimizerConfig, timing: bool) -> Result<ReportRow> {
    let start = Instant::now();
    let n = spec.n.unwrap_or(cell.lambda.len());
    let space = SpaceSpec::new(n, cell.p)?;
    let (r, lower, upper, certified, method) = match cell.family_size {
        None => {
            let kg = GrothendieckConstant::new(cfg.kg)?;
            let cert = certify_moduli_norm(&cell.lambda, space, kg, cfg.enumeration_cap)?;
            let label = cert.provenance.iter().map(|m| m.as_str()).collect::<Vec<_>>().join("+");
            (cert.r, cert.lower, Some(cert.upper), cert.certified, label)
        }
        Some(m) => {
            let f = LatticeExpr::moduli_combination_in(&cell.lambda, n)?;
            let est = optimize_family(&f, space, m, cfg)?;
            let label = format!("{} (M={m})", est.method_label());
            (ell_r_exponent(cell.p).ok(), est.lower, est.upper, est.certified, label)
        }
    };
    Ok(ReportRow {
        experiment: spec.name.clone(),
        p: cell.p,
        n,
        m: cell.lambda.len(),
        lambda: lambda_digest(&cell.lambda),
        r,
        lower,
        upper,
        certified,
        method,
        ms: timing.then(|| start.elapsed().as_millis() as u64),
    })
}

/// One row per (p, coefficient vector, family size) in that nesting order.
/// Cells run in parallel; rows come back in grid order.
pub fn run_scan(spec: &ExperimentSpec, timing: bool) -> Result<Vec<ReportRow>> {
    spec.validate()?;
    let mut cfg = spec.optimizer;
    if let Some(kg) = spec.kg {
        cfg.kg = kg;
    }
    let sizes: Vec<Option<usize>> = match &spec.family_sizes {
        Some(s) => s.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let lambdas = spec.lambdas();
    let mut cells = Vec::new();
    for &p in &spec.p {
        for lambda in &lambdas {
            for &family_size in &sizes {
                cells.push(Cell {
                    p,
                    lambda: lambda.clone(),
                    family_size,
                });
            }
        }
    }
    cells.par_iter().map(|c| run_cell(spec, c, &cfg, timing)).collect()
}
