//! Parameter scans and the verification suites.

pub mod corpus;
mod report;
mod scan;
mod spec;
pub mod verify;

pub use report::{lambda_digest, write_csv, ReportRow, CSV_COLUMNS};
pub use scan::run_scan;
pub use spec::{random_lambda, ExperimentSpec, LambdaSources, RandomLambda, SignMode};
pub use verify::{verify, SuiteReport, Tolerances, VerifyOptions, VerifyReport, SUITES};
