/* C interface to the uqsl-shapovalov engine. Generated by cbindgen; do not edit. */

#ifndef UQSL_SHAPOVALOV_H
#define UQSL_SHAPOVALOV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum UqslStatus {
  UQSL_STATUS_OK = 0,
  UQSL_STATUS_NULL_POINTER = 1,
  UQSL_STATUS_INVALID_ARGUMENT = 2,
  UQSL_STATUS_INDEX_OUT_OF_RANGE = 3,
  UQSL_STATUS_DEGENERATE_WEIGHT = 4,
  UQSL_STATUS_FORMULA_DISCREPANCY = 5,
  UQSL_STATUS_INTERNAL = 6,
  UQSL_STATUS_PANIC = 7,
} UqslStatus;

/**
 * Opaque engine handle: a specialization of the highest weight together with
 * the caches of its Verma module.
 */
typedef struct UqslEngine UqslEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *uqsl_last_error_message(void);

/**
 * Creates an engine for rank `n`, deformation parameter `q` (`"num/den"`) and
 * highest weight `z` (comma-separated `"num/den"` values, `z_i = q^{λ_i}`).
 *
 * # Safety
 * `q` and `z` must be valid NUL-terminated strings and `out` a valid pointer.
 */
enum UqslStatus uqsl_engine_new(size_t n, const char *q, const char *z, struct UqslEngine **out);

/**
 * Creates an engine at the default profile: `q = 2`, `z = (3, 5, 7, …)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum UqslStatus uqsl_engine_new_default(size_t n, struct UqslEngine **out);

/**
 * Releases an engine. Passing null is allowed.
 *
 * # Safety
 * `e` must be null or a handle from [`uqsl_engine_new`] not yet freed.
 */
void uqsl_engine_free(struct UqslEngine *e);

/**
 * Releases a string returned by this library. Passing null is allowed.
 *
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void uqsl_string_free(char *s);

/**
 * The rank `n` of the engine, or 0 for a null handle.
 *
 * # Safety
 * `e` must be null or a valid handle.
 */
size_t uqsl_engine_rank(const struct UqslEngine *e);

/**
 * The predicted norm `B_l` of the dynamical basis vector with exponents
 * `entries` (row by row: `l_11..l_1n, l_22..l_2n, …, l_nn`), as `"num/den"`.
 *
 * # Safety
 * `entries` must point to `len` values; `out` must be a valid pointer.
 */
enum UqslStatus uqsl_b_total(const struct UqslEngine *e,
                             const uint32_t *entries,
                             size_t len,
                             char **out);

/**
 * Whether every `B_l` of content degree at most `depth` is nonzero. When not,
 * and `witness` is non-null, the first degenerate array is written there.
 *
 * # Safety
 * `generic` must be valid; `witness` may be null.
 */
enum UqslStatus uqsl_genericity(const struct UqslEngine *e,
                                uint32_t depth,
                                bool *generic,
                                char **witness);

/**
 * Whether the scalar criterion for `f̂_{kn}^m v` to be singular holds.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum UqslStatus uqsl_singular_criterion(const struct UqslEngine *e,
                                        size_t k,
                                        uint32_t m,
                                        bool *out);

/**
 * Runs a verification suite by name at the engine's weight. `passed`
 * receives the verdict; `checks`, if non-null, the number of checks made.
 *
 * # Safety
 * `name` must be a valid string; `passed` a valid pointer; `checks` may be null.
 */
enum UqslStatus uqsl_run_suite(const struct UqslEngine *e,
                               const char *name,
                               uint32_t depth,
                               uint32_t power,
                               bool *passed,
                               uint64_t *checks);

/**
 * Contravariant pairing of the standard basis vectors with exponents `a` and
 * `b` (each `len` entries, row by row), as `"num/den"`.
 *
 * # Safety
 * `a` and `b` must point to `len` values; `out` must be valid.
 */
enum UqslStatus uqsl_contravariant_pairing(const struct UqslEngine *e,
                                           const uint32_t *a,
                                           const uint32_t *b,
                                           size_t len,
                                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UQSL_SHAPOVALOV_H */
