#ifndef FBLNORM_H
#define FBLNORM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every entry point.
typedef enum FblStatus {
  FBL_STATUS_OK = 0,
  FBL_STATUS_NULL_POINTER = 1,
  FBL_STATUS_INVALID_UTF8 = 2,
  FBL_STATUS_PARSE = 3,
  FBL_STATUS_DIMENSION = 4,
  FBL_STATUS_INDEX = 5,
  FBL_STATUS_INVALID_VALUE = 6,
  FBL_STATUS_DOMAIN = 7,
  FBL_STATUS_DEGENERATE = 8,
  FBL_STATUS_CAPACITY = 9,
  FBL_STATUS_CONFIG = 10,
  FBL_STATUS_BUFFER_TOO_SMALL = 11,
  FBL_STATUS_PANIC = 12,
} FblStatus;

// A parsed lattice expression.
typedef struct FblExpr FblExpr;

// A finite family of functionals on `l_p^n`.
typedef struct FblFamily FblFamily;

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *fbl_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void fbl_string_free(char *s);

// Parses `text`; the dimension is inferred from the generators and atoms
// when `n` is 0.
//
// # Safety
// `text` must be a nul-terminated string and `out` writable.
enum FblStatus fbl_expr_parse(const char *text_ptr, size_t n, struct FblExpr **out);

// Builds `sum_i lambda_i |d(e_i)|` on `n >= len` coordinates.
//
// # Safety
// `lambda` must point to `len` doubles and `out` be writable.
enum FblStatus fbl_expr_moduli(const double *lambda, size_t len, size_t n, struct FblExpr **out);

// # Safety
// `expr` must come from this library and not be freed twice.
void fbl_expr_free(struct FblExpr *expr);

// Dimension of the expression, 0 for a null handle.
//
// # Safety
// `expr` must be null or a live handle.
size_t fbl_expr_dim(const struct FblExpr *expr);

// Evaluates the expression at `xstar` (length `len`).
//
// # Safety
// `expr` must be a live handle, `xstar` point to `len` doubles and `out`
// be writable.
enum FblStatus fbl_expr_eval(const struct FblExpr *expr,
                             const double *xstar,
                             size_t len,
                             double *out);

// Canonical text of the expression; release with `fbl_string_free`.
//
// # Safety
// `expr` must be a live handle and `out` writable.
enum FblStatus fbl_expr_format(const struct FblExpr *expr, char **out);

// A family of `m` functionals on `l_p^n` from `m * n` doubles, one
// functional after another.
//
// # Safety
// `data` must point to `m * n` doubles and `out` be writable.
enum FblStatus fbl_family_new(size_t n,
                              double p,
                              size_t m,
                              const double *data,
                              struct FblFamily **out);

// # Safety
// `family` must come from this library and not be freed twice.
void fbl_family_free(struct FblFamily *family);

// Number of functionals, 0 for a null handle.
//
// # Safety
// `family` must be null or a live handle.
size_t fbl_family_len(const struct FblFamily *family);

// Exact constraint value of the family. `cap` bounds the number of free
// sign bits enumerated; 0 selects the default.
//
// # Safety
// `family` must be a live handle and `out` writable.
enum FblStatus fbl_constraint_exact(const struct FblFamily *family, size_t cap, double *out);

// `sum_k |f(x*_k)|` over the family.
//
// # Safety
// Both handles must be live and `out` writable.
enum FblStatus fbl_objective(const struct FblExpr *expr,
                             const struct FblFamily *family,
                             double *out);

// Certificate JSON for `sum_i lambda_i |d(e_i)|` on `l_p^n` (`n = 0`
// means `len`). `kg <= 0` selects the default Grothendieck constant.
//
// # Safety
// `lambda` must point to `len` doubles and `out` be writable.
enum FblStatus fbl_certify_moduli(const double *lambda,
                                  size_t len,
                                  size_t n,
                                  double p,
                                  double kg,
                                  char **out);

// Runs the optimizer over families of size `m` and returns the estimate
// as JSON. `config_json` may be null; otherwise it is an object with any
// of the optimizer settings (`seed`, `restarts`, `iterations`, ...).
//
// # Safety
// `expr` must be a live handle, `config_json` null or a nul-terminated
// string, and `out` writable.
enum FblStatus fbl_optimize(const struct FblExpr *expr,
                            double p,
                            size_t m,
                            const char *config_json,
                            char **out);

// Writes the `2^k x 2^k` Walsh matrix row by row into `buf`, which must
// hold `4^k` entries; `BufferTooSmall` reports the size needed in
// `needed` when it is non-null.
//
// # Safety
// `buf` must point to `cap` writable bytes; `needed` must be null or
// writable.
enum FblStatus fbl_walsh_fill(uint32_t k, int8_t *buf, size_t cap, size_t *needed);

#endif  /* FBLNORM_H */
