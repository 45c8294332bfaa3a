//! C ABI for `fblnorm`.
//!
//! Every function returns an [`FblStatus`]; on failure the message is
//! available from [`fbl_last_error`] on the calling thread. Handles are
//! opaque and owned by the caller, who releases them with the matching
//! `*_free` function. Strings returned by the library are released with
//! [`fbl_string_free`]. Panics never cross the boundary.
//!
//! Exponents are passed as doubles; `INFINITY` selects `c_0`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fblnorm::bounds::{certify_moduli_norm, walsh_matrix, GrothendieckConstant};
use fblnorm::engine::{constraint_norm_exact, objective, optimize_family, FunctionalFamily, OptimizerConfig};
use fblnorm::expr::{parse, parse_with_dim};
use fblnorm::space::{Exponent, SpaceSpec};
use fblnorm::{Error, LatticeExpr};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FblStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Dimension = 4,
    Index = 5,
    InvalidValue = 6,
    Domain = 7,
    Degenerate = 8,
    Capacity = 9,
    Config = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// A parsed lattice expression.
pub struct FblExpr {
    inner: LatticeExpr,
}

/// A finite family of functionals on `l_p^n`.
pub struct FblFamily {
    inner: FunctionalFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(FblStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Dimension { .. } => FblStatus::Dimension,
            Error::Index { .. } => FblStatus::Index,
            Error::Parse { .. } => FblStatus::Parse,
            Error::InvalidValue(_) => FblStatus::InvalidValue,
            Error::Domain(_) => FblStatus::Domain,
            Error::Degenerate(_) => FblStatus::Degenerate,
            Error::Capacity { .. } => FblStatus::Capacity,
            Error::Config(_) => FblStatus::Config,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FblStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FblStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FblStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FblStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FblStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior nul").into_raw()
}

fn json_failure(e: serde_json::Error) -> Failure {
    Failure(FblStatus::InvalidValue, e.to_string())
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fbl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fbl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text`; the dimension is inferred from the generators and atoms
/// when `n` is 0.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_expr_parse(text_ptr: *const c_char, n: usize, out: *mut *mut FblExpr) -> FblStatus {
    guard(|| {
        let t = text(text_ptr, "text")?;
        let inner = if n == 0 { parse(t)? } else { parse_with_dim(t, n)? };
        write(out, Box::into_raw(Box::new(FblExpr { inner })), "out")
    })
}

/// Builds `sum_i lambda_i |d(e_i)|` on `n >= len` coordinates.
///
/// # Safety
/// `lambda` must point to `len` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_expr_moduli(lambda: *const f64, len: usize, n: usize, out: *mut *mut FblExpr) -> FblStatus {
    guard(|| {
        let l = slice(lambda, len, "lambda")?;
        let inner = LatticeExpr::moduli_combination_in(l, n)?;
        write(out, Box::into_raw(Box::new(FblExpr { inner })), "out")
    })
}

/// # Safety
/// `expr` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fbl_expr_free(expr: *mut FblExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Dimension of the expression, 0 for a null handle.
///
/// # Safety
/// `expr` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fbl_expr_dim(expr: *const FblExpr) -> usize {
    expr.as_ref().map_or(0, |e| e.inner.dim())
}

/// Evaluates the expression at `xstar` (length `len`).
///
/// # Safety
/// `expr` must be a live handle, `xstar` point to `len` doubles and `out`
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_expr_eval(expr: *const FblExpr, xstar: *const f64, len: usize, out: *mut f64) -> FblStatus {
    guard(|| {
        let e = expr.as_ref().ok_or_else(|| null("expr"))?;
        let x = slice(xstar, len, "xstar")?;
        write(out, e.inner.evaluate(x)?, "out")
    })
}

/// Canonical text of the expression; release with `fbl_string_free`.
///
/// # Safety
/// `expr` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_expr_format(expr: *const FblExpr, out: *mut *mut c_char) -> FblStatus {
    guard(|| {
        let e = expr.as_ref().ok_or_else(|| null("expr"))?;
        write(out, owned_string(e.inner.to_string()), "out")
    })
}

/// A family of `m` functionals on `l_p^n` from `m * n` doubles, one
/// functional after another.
///
/// # Safety
/// `data` must point to `m * n` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_family_new(
    n: usize,
    p: f64,
    m: usize,
    data: *const f64,
    out: *mut *mut FblFamily,
) -> FblStatus {
    guard(|| {
        let count = m
            .checked_mul(n)
            .ok_or_else(|| Failure(FblStatus::InvalidValue, "m * n overflows".into()))?;
        let d = slice(data, count, "data")?;
        let space = SpaceSpec::new(n, Exponent::new(p)?)?;
        let inner = FunctionalFamily::from_flat(space, m, d.to_vec())?;
        write(out, Box::into_raw(Box::new(FblFamily { inner })), "out")
    })
}

/// # Safety
/// `family` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fbl_family_free(family: *mut FblFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Number of functionals, 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fbl_family_len(family: *const FblFamily) -> usize {
    family.as_ref().map_or(0, |f| f.inner.len())
}

/// Exact constraint value of the family. `cap` bounds the number of free
/// sign bits enumerated; 0 selects the default.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_constraint_exact(family: *const FblFamily, cap: usize, out: *mut f64) -> FblStatus {
    guard(|| {
        let f = family.as_ref().ok_or_else(|| null("family"))?;
        let cap = if cap == 0 { fblnorm::engine::DEFAULT_ENUMERATION_CAP } else { cap };
        write(out, constraint_norm_exact(&f.inner, cap)?, "out")
    })
}

/// `sum_k |f(x*_k)|` over the family.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_objective(expr: *const FblExpr, family: *const FblFamily, out: *mut f64) -> FblStatus {
    guard(|| {
        let e = expr.as_ref().ok_or_else(|| null("expr"))?;
        let f = family.as_ref().ok_or_else(|| null("family"))?;
        write(out, objective(&e.inner, &f.inner)?, "out")
    })
}

/// Certificate JSON for `sum_i lambda_i |d(e_i)|` on `l_p^n` (`n = 0`
/// means `len`). `kg <= 0` selects the default Grothendieck constant.
///
/// # Safety
/// `lambda` must point to `len` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_certify_moduli(
    lambda: *const f64,
    len: usize,
    n: usize,
    p: f64,
    kg: f64,
    out: *mut *mut c_char,
) -> FblStatus {
    guard(|| {
        let l = slice(lambda, len, "lambda")?;
        let space = SpaceSpec::new(if n == 0 { len } else { n }, Exponent::new(p)?)?;
        let kg = if kg > 0.0 { GrothendieckConstant::new(kg)? } else { GrothendieckConstant::KRIVINE };
        let cert = certify_moduli_norm(l, space, kg, fblnorm::engine::DEFAULT_ENUMERATION_CAP)?;
        write(out, owned_string(serde_json::to_string(&cert).map_err(json_failure)?), "out")
    })
}

/// Runs the optimizer over families of size `m` and returns the estimate
/// as JSON. `config_json` may be null; otherwise it is an object with any
/// of the optimizer settings (`seed`, `restarts`, `iterations`, ...).
///
/// # Safety
/// `expr` must be a live handle, `config_json` null or a nul-terminated
/// string, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_optimize(
    expr: *const FblExpr,
    p: f64,
    m: usize,
    config_json: *const c_char,
    out: *mut *mut c_char,
) -> FblStatus {
    guard(|| {
        let e = expr.as_ref().ok_or_else(|| null("expr"))?;
        let cfg: OptimizerConfig = if config_json.is_null() {
            OptimizerConfig::default()
        } else {
            serde_json::from_str(text(config_json, "config_json")?)
                .map_err(|err| Failure(FblStatus::Config, format!("config_json: {err}")))?
        };
        let space = SpaceSpec::new(e.inner.dim(), Exponent::new(p)?)?;
        let est = optimize_family(&e.inner, space, m, &cfg)?;
        write(out, owned_string(serde_json::to_string(&est).map_err(json_failure)?), "out")
    })
}

/// Writes the `2^k x 2^k` Walsh matrix row by row into `buf`, which must
/// hold `4^k` entries; `BufferTooSmall` reports the size needed in
/// `needed` when it is non-null.
///
/// # Safety
/// `buf` must point to `cap` writable bytes; `needed` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fbl_walsh_fill(k: u32, buf: *mut i8, cap: usize, needed: *mut usize) -> FblStatus {
    guard(|| {
        let w = walsh_matrix(k)?;
        let size = w.size() * w.size();
        if !needed.is_null() {
            needed.write(size);
        }
        if cap < size {
            return Err(Failure(
                FblStatus::BufferTooSmall,
                format!("buffer holds {cap} entries, {size} needed"),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let out = std::slice::from_raw_parts_mut(buf, size);
        for i in 0..w.size() {
            for j in 0..w.size() {
                out[i * w.size() + j] = w.get(i, j);
            }
        }
        Ok(())
    })
}
