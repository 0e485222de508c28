#ifndef LCTKIT_H
#define LCTKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The nonzero values 1 to 4 match the exit codes of the
 * `lctkit` command.
 */
typedef enum LctStatus {
  LCT_STATUS_OK = 0,
  /**
   * Malformed input text or an i/o failure.
   */
  LCT_STATUS_PARSE = 1,
  /**
   * Valid input outside the domain of the operation, for example an
   * ideal that is not m-primary or mismatched dimensions.
   */
  LCT_STATUS_DOMAIN = 2,
  /**
   * A size or time cap was hit.
   */
  LCT_STATUS_RESOURCE = 3,
  /**
   * Numerical failure, internal error or a caught panic.
   */
  LCT_STATUS_INTERNAL = 4,
  /**
   * A required pointer was null or a string was not UTF-8.
   */
  LCT_STATUS_INVALID_ARGUMENT = 5,
} LctStatus;

/**
 * Opaque monomial ideal.
 */
typedef struct LctIdeal LctIdeal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *lct_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lct_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void lct_string_free(char *s);

/**
 * Parses the `.ideal` text format (a `vars n` line, then one generator per
 * line as exponent vector or monomial).
 *
 * # Safety
 * `text` must be a NUL-terminated string, `out` a writable pointer.
 */
enum LctStatus lct_ideal_parse(const char *text, struct LctIdeal **out);

/**
 * Builds an ideal from `count` exponent vectors of length `dim`, stored
 * row after row in `exponents`.
 *
 * # Safety
 * `exponents` must point to `dim * count` readable values.
 */
enum LctStatus lct_ideal_from_exponents(size_t dim,
                                        const uint32_t *exponents,
                                        size_t count,
                                        struct LctIdeal **out);

/**
 * Releases an ideal. Null is ignored.
 *
 * # Safety
 * `ideal` must come from this library and not have been freed already.
 */
void lct_ideal_free(struct LctIdeal *ideal);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `ideal` must be null or a live handle.
 */
size_t lct_ideal_dim(const struct LctIdeal *ideal);

/**
 * Canonical text form of the ideal, for example `(x1^2, x2^3)`.
 *
 * # Safety
 * `ideal` must be a live handle and `out` writable.
 */
enum LctStatus lct_ideal_to_string(const struct LctIdeal *ideal, char **out);

/**
 * # Safety
 * `ideal` must be a live handle and `out` writable.
 */
enum LctStatus lct_ideal_is_m_primary(const struct LctIdeal *ideal, bool *out);

/**
 * Number of monomials outside the ideal.
 *
 * # Safety
 * `ideal` must be a live handle and `out` writable.
 */
enum LctStatus lct_ideal_colength(const struct LctIdeal *ideal, uint64_t *out);

/**
 * Product of two ideals as a new handle.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum LctStatus lct_ideal_product(const struct LctIdeal *a,
                                 const struct LctIdeal *b,
                                 struct LctIdeal **out);

/**
 * Exact log canonical threshold as a reduced fraction string such as `5/6`.
 *
 * # Safety
 * `ideal` must be a live handle and `out` writable.
 */
enum LctStatus lct_ideal_lct(const struct LctIdeal *ideal, char **out);

/**
 * Exact Samuel multiplicity as a fraction string (always an integer).
 *
 * # Safety
 * `ideal` must be a live handle and `out` writable.
 */
enum LctStatus lct_ideal_multiplicity(const struct LctIdeal *ideal, char **out);

/**
 * Full inequality report as a JSON object, the same fields as the `result`
 * of `lctkit check` without the colength entries.
 *
 * # Safety
 * `ideal` must be a live handle and `out` writable.
 */
enum LctStatus lct_ideal_check_json(const struct LctIdeal *ideal, char **out);

/**
 * Monte Carlo bracket `[lo, hi]` for the threshold of the ideal, using the
 * default sampler settings with the given seed and sample count (0 keeps
 * the default count). `hi` is infinite when the search cap was reached.
 *
 * # Safety
 * `ideal` must be a live handle, `lo` and `hi` writable.
 */
enum LctStatus lct_ideal_estimate_threshold(const struct LctIdeal *ideal,
                                            uint64_t seed,
                                            size_t samples,
                                            double *lo,
                                            double *hi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LCTKIT_H */
