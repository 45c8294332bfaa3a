use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::space::{norm, Exponent};

/// Column order of scan reports.
pub const CSV_COLUMNS: [&str; 11] = [
    "experiment", "p", "n", "m", "lambda", "r", "lower", "upper", "certified", "method", "ms",
];

/// Coefficient vectors up to this length are written out in full.
const FULL_DIGEST_LEN: usize = 16;

/// One grid cell of a scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub p: Exponent,
    pub n: usize,
    /// Number of coefficients.
    pub m: usize,
    pub lambda: String,
    pub r: Option<f64>,
    pub lower: f64,
    pub upper: Option<f64>,
    pub certified: bool,
    pub method: String,
    /// Wall time, recorded only when timing is requested.
    pub ms: Option<u64>,
}

/// `1,2.5,-3` for short vectors; for longer ones a SHA-256 prefix of that
/// rendering followed by the `l_1`, `l_2` and `l_inf` norms.
pub fn lambda_digest(lambda: &[f64]) -> String {
    let full = lambda.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    if lambda.len() <= FULL_DIGEST_LEN {
        return full;
    }
    let hash = Sha256::digest(full.as_bytes());
    format!(
        "sha256:{} len={} l1={} l2={} linf={}",
        &hex::encode(hash)[..16],
        lambda.len(),
        norm(lambda, Exponent::ONE),
        norm(lambda, Exponent::TWO),
        norm(lambda, Exponent::Infinite)
    )
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the header (after an optional `# ...` comment line) and the rows.
pub fn write_csv(out: impl Write, rows: &[ReportRow], comment: Option<&str>) -> Result<()> {
    let io = |e: std::io::Error| Error::Config(format!("cannot write report: {e}"));
    let mut out = out;
    if let Some(c) = comment {
        writeln!(out, "# {c}").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Config(format!("cannot write report: {e}"));
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for row in rows {
        w.write_record([
            row.experiment.clone(),
            row.p.to_string(),
            row.n.to_string(),
            row.m.to_string(),
            row.lambda.clone(),
            opt(row.r),
            row.lower.to_string(),
            opt(row.upper),
            row.certified.to_string(),
            row.method.clone(),
            row.ms.map(|v| v.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digests() {
        assert_eq!(lambda_digest(&[1.0, 2.5, -3.0]), "1,2.5,-3");
        let long = lambda_digest(&[1.0; 17]);
        assert!(long.starts_with("sha256:"));
        assert!(long.ends_with("len=17 l1=17 l2=4.123105625617661 linf=1"));
        assert_ne!(long, lambda_digest(&[2.0; 17]));
    }

    #[test]
    fn csv_layout() {
        let row = ReportRow {
            experiment: "e".into(),
            p: Exponent::Infinite,
            n: 2,
            m: 2,
            lambda: lambda_digest(&[1.0, 1.0]),
            r: Some(2.0),
            lower: 1.4142135623730951,
            upper: None,
            certified: true,
            method: "walsh-witness+krivine-upper".into(),
            ms: None,
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &[row], Some("generated")).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# generated\nexperiment,p,n,m,lambda,r,lower,upper,certified,method,ms\n\
             e,inf,2,2,\"1,1\",2,1.4142135623730951,,true,walsh-witness+krivine-upper,\n"
        );
    }
}
