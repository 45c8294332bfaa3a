//! Comparison tolerances shared by the test suites and the verifier.

/// Default relative tolerance for comparing computed quantities.
pub const RELATIVE: f64 = 1e-9;
/// Widened tolerance used to re-check a certified claim before failing it.
pub const WIDENED: f64 = 1e-7;
/// Slack allowed on a normalized constraint value (`<= 1 + FEASIBILITY`).
pub const FEASIBILITY: f64 = 1e-12;

/// `|a - b| <= tol * (1 + max(|a|, |b|))`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
