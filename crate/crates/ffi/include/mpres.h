#ifndef MPRES_H
#define MPRES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MpresStatus {
  MPRES_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MPRES_STATUS_NULL_POINTER = 1,
  /**
   * A string argument is not UTF-8 or does not parse.
   */
  MPRES_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The inputs violate an admissibility condition.
   */
  MPRES_STATUS_NOT_ADMISSIBLE = 3,
  /**
   * A search ran out of its bound.
   */
  MPRES_STATUS_BOUND_EXCEEDED = 4,
  /**
   * A computation hit a degenerate case.
   */
  MPRES_STATUS_DEGENERATE = 5,
  /**
   * Any other domain error.
   */
  MPRES_STATUS_DOMAIN_ERROR = 6,
  /**
   * An internal panic was caught at the boundary.
   */
  MPRES_STATUS_PANIC = 7,
} MpresStatus;

/**
 * A verified certificate for a pair of primes of `Z[w]`.
 */
typedef struct MpresCertificate MpresCertificate;

/**
 * A validated presentation of link type.
 */
typedef struct MpresPresentation MpresPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string of the library; static, never freed.
 */
const char *mpres_version(void);

/**
 * Copy of the last error message on this thread, or null. Free with
 * [`mpres_string_free`].
 */
char *mpres_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void mpres_string_free(char *s);

/**
 * Legendre symbol `(a/p)` in `{-1, 0, 1}`.
 *
 * # Safety
 * `a`, `p` are NUL-terminated strings; `out` is writable.
 */
enum MpresStatus mpres_legendre(const char *a, const char *p, int8_t *out);

/**
 * Quadratic triple symbol exponent (0 or 1). `bound = 0` selects the default.
 *
 * # Safety
 * String arguments are NUL-terminated; `exponent` is writable.
 */
enum MpresStatus mpres_redei_symbol(const char *p1,
                                    const char *p2,
                                    const char *p3,
                                    uint64_t bound,
                                    uint64_t *exponent);

/**
 * Triple cubic residue symbol exponent in `{0, 1, 2}`. Primes are given as
 * rational primes (`"17"`) or generators (`"-5-3*w"`). `bound = 0` selects
 * the default.
 *
 * # Safety
 * String arguments are NUL-terminated; `exponent` is writable.
 */
enum MpresStatus mpres_cubic_symbol(const char *p1,
                                    const char *p2,
                                    const char *p3,
                                    uint64_t bound,
                                    uint64_t *exponent);

/**
 * Builds a certificate for `(p1, p2)`. `bound = 0` selects the default.
 *
 * # Safety
 * String arguments are NUL-terminated; `out` is writable.
 */
enum MpresStatus mpres_certificate_new(const char *p1,
                                       const char *p2,
                                       uint64_t bound,
                                       struct MpresCertificate **out);

/**
 * Symbol exponent of the certificate's pair at `p3`.
 *
 * # Safety
 * `cert` is a live handle; `p3` is NUL-terminated; `exponent` is writable.
 */
enum MpresStatus mpres_certificate_symbol(const struct MpresCertificate *cert,
                                          const char *p3,
                                          uint64_t *exponent);

/**
 * JSON form of the certificate. Free the result with [`mpres_string_free`].
 *
 * # Safety
 * `cert` is a live handle; `out` is writable.
 */
enum MpresStatus mpres_certificate_json(const struct MpresCertificate *cert, char **out);

/**
 * # Safety
 * `cert` is null or a live handle, not used afterwards.
 */
void mpres_certificate_free(struct MpresCertificate *cert);

/**
 * Parses a presentation from JSON (`l`, `m`, `norms`, `y`, `S`).
 *
 * # Safety
 * `json` is NUL-terminated; `out` is writable.
 */
enum MpresStatus mpres_presentation_from_json(const char *json, struct MpresPresentation **out);

/**
 * # Safety
 * `pres` is null or a live handle, not used afterwards.
 */
void mpres_presentation_free(struct MpresPresentation *pres);

/**
 * Milnor invariant of the 1-based multi-index: raw value, indeterminacy
 * generator (`0` for the zero ideal) and the reduced class.
 *
 * # Safety
 * `pres` is a live handle; `index` points to `len` values; outputs are writable.
 */
enum MpresStatus mpres_milnor_invariant(const struct MpresPresentation *pres,
                                        const size_t *index,
                                        size_t len,
                                        uint64_t *value,
                                        uint64_t *delta,
                                        uint64_t *reduced);

/**
 * Exponent of the power residue symbol attached to the multi-index.
 *
 * # Safety
 * `pres` is a live handle; `index` points to `len` values; `exponent` is writable.
 */
enum MpresStatus mpres_tuple_symbol(const struct MpresPresentation *pres,
                                    const size_t *index,
                                    size_t len,
                                    uint64_t *exponent);

/**
 * Magnus coefficient of `word` (e.g. `"[x1,x2] x3^-1"`) at the 1-based
 * multi-index, modulo the prime power `m`.
 *
 * # Safety
 * `word` is NUL-terminated; `index` points to `len` values; `out` is writable.
 */
enum MpresStatus mpres_magnus_coefficient(const char *word,
                                          const size_t *index,
                                          size_t len,
                                          uint64_t m,
                                          uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MPRES_H */
