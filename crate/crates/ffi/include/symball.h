#ifndef SYMBALL_H
#define SYMBALL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum SymballStatus {
  SYMBALL_STATUS_OK = 0,
  SYMBALL_STATUS_NULL_POINTER = 1,
  SYMBALL_STATUS_INVALID_ARGUMENT = 2,
  SYMBALL_STATUS_DIMENSION_MISMATCH = 3,
  SYMBALL_STATUS_NON_FINITE = 4,
  SYMBALL_STATUS_NOT_SYMMETRIC = 5,
  SYMBALL_STATUS_NOT_POSITIVE_DEFINITE = 6,
  SYMBALL_STATUS_NOT_SYMPLECTIC = 7,
  SYMBALL_STATUS_NOT_COMPLEX = 8,
  SYMBALL_STATUS_RANK_DEFICIENT = 9,
  SYMBALL_STATUS_SINGULAR = 10,
  /**
   * Eigensolver, pairing or Gram-Schmidt failure.
   */
  SYMBALL_STATUS_NUMERICAL_FAILURE = 11,
  SYMBALL_STATUS_PARSE = 12,
  SYMBALL_STATUS_IO = 13,
  /**
   * A Rust panic was caught at the boundary.
   */
  SYMBALL_STATUS_INTERNAL = 14,
} SymballStatus;

/**
 * Projection of a symplectic ball onto a coordinate splitting.
 */
typedef struct SymballAnalysis SymballAnalysis;

/**
 * Dense real matrix, row-major.
 */
typedef struct SymballMatrix SymballMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *symball_last_error(void);

/**
 * Copies `rows * cols` row-major values into a new matrix.
 *
 * # Safety
 * `data` must point to `rows * cols` readable doubles; `out` must be writable.
 */
enum SymballStatus symball_matrix_new(size_t rows,
                                      size_t cols,
                                      const double *data,
                                      struct SymballMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void symball_matrix_free(struct SymballMatrix *m);

/**
 * Row count, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t symball_matrix_rows(const struct SymballMatrix *m);

/**
 * Column count, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t symball_matrix_cols(const struct SymballMatrix *m);

/**
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum SymballStatus symball_matrix_get(const struct SymballMatrix *m,
                                      size_t row,
                                      size_t col,
                                      double *out);

/**
 * Copies the entries, row-major, into `buf`, which must hold at least
 * `rows * cols` values.
 *
 * # Safety
 * `m` must be a live handle and `buf` must point to `len` writable doubles.
 */
enum SymballStatus symball_matrix_copy(const struct SymballMatrix *m, double *buf, size_t len);

/**
 * Deterministic random symplectic matrix of size `2n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SymballStatus symball_random_symplectic(size_t n,
                                             double spread,
                                             uint64_t seed,
                                             struct SymballMatrix **out);

/**
 * Symplectic spectrum of the SPD matrix `m` (size `2n`), ascending, into
 * `buf[0..n]`.
 *
 * # Safety
 * `m` must be a live handle and `buf` must point to `len` writable doubles.
 */
enum SymballStatus symball_symplectic_spectrum(const struct SymballMatrix *m,
                                               size_t n,
                                               double *buf,
                                               size_t len);

/**
 * Whether `M + iJ` is positive semidefinite.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum SymballStatus symball_psd_check(const struct SymballMatrix *m, size_t n, bool *out);

/**
 * Williamson normal form `M = SᵀDS`. Writes a new handle for `S` to `s_out`
 * and the symplectic spectrum to `lambda[0..n]`.
 *
 * # Safety
 * `m` must be a live handle, `s_out` writable, and `lambda` must point to
 * `len` writable doubles.
 */
enum SymballStatus symball_williamson(const struct SymballMatrix *m,
                                      size_t n,
                                      struct SymballMatrix **s_out,
                                      double *lambda,
                                      size_t len);

/**
 * Projects `S(B(radius))` onto the first `n_a` degrees of freedom.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum SymballStatus symball_analyze_split(const struct SymballMatrix *s,
                                         size_t n_a,
                                         double radius,
                                         struct SymballAnalysis **out);

/**
 * # Safety
 * `a` must be null or a handle from this library not yet freed.
 */
void symball_analysis_free(struct SymballAnalysis *a);

/**
 * Number of degrees of freedom kept, or 0 for a null handle.
 *
 * # Safety
 * `a` must be null or a live handle.
 */
size_t symball_analysis_n_a(const struct SymballAnalysis *a);

/**
 * Symplectic spectrum of the projected ball into `buf[0..n_a]`.
 *
 * # Safety
 * `a` must be a live handle and `buf` must point to `len` writable doubles.
 */
enum SymballStatus symball_analysis_lambda(const struct SymballAnalysis *a,
                                           double *buf,
                                           size_t len);

/**
 * Writes the exact and borderline flags and the relative coupling.
 *
 * # Safety
 * `a` must be a live handle; `exact` and `borderline` writable.
 */
enum SymballStatus symball_analysis_exactness(const struct SymballAnalysis *a,
                                              bool *exact,
                                              bool *borderline,
                                              double *coupling);

/**
 * Volumes of the projected ellipsoid, of the ball of the same radius in
 * the kept coordinates, and of the inscribed symplectic ball.
 *
 * # Safety
 * `a` must be a live handle; the three outputs writable.
 */
enum SymballStatus symball_analysis_volumes(const struct SymballAnalysis *a,
                                            double *projected,
                                            double *bound,
                                            double *inscribed);

/**
 * New handle for the symplectic `S_A` whose ball is inscribed in the
 * projection.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum SymballStatus symball_analysis_s_a(const struct SymballAnalysis *a,
                                        struct SymballMatrix **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMBALL_H */
