#ifndef HDE_H
#define HDE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every FFI entry point.
 */
typedef enum HdeStatus {
  HDE_STATUS_OK = 0,
  HDE_STATUS_DOMAIN_ERROR = 1,
  HDE_STATUS_CAPACITY_ERROR = 2,
  HDE_STATUS_PRECONDITION_ERROR = 3,
  HDE_STATUS_PARSE_ERROR = 4,
  HDE_STATUS_IO_ERROR = 5,
  HDE_STATUS_INVALID_ARGUMENT = 6,
  HDE_STATUS_PANIC = 7,
} HdeStatus;

/**
 * Opaque modelled-code handle.
 */
typedef struct HdeCode HdeCode;

/**
 * Opaque two-layer system handle.
 */
typedef struct HdeSystem HdeSystem;

/**
 * A rational result as a (numerator, denominator) pair of 64-bit integers;
 * `approx` carries the f64 value (exact when representable).
 */
typedef struct HdeRational {
  int64_t numer;
  int64_t denom;
  double approx;
} HdeRational;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the most recent error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length.
 */
size_t hde_last_error(char *buf, size_t len);

/**
 * Loads and validates a two-layer system from a `#tls v1` file.
 */
enum HdeStatus hde_system_load(const char *path, struct HdeSystem **out);

void hde_system_free(struct HdeSystem *sys);

/**
 * Writes the inferred parameters (s, k, K) of the system.
 */
enum HdeStatus hde_system_params(const struct HdeSystem *sys, size_t *s, size_t *k, size_t *big_k);

/**
 * Certifies the HDE condition at λ = numer/denom. Writes the overall verdict.
 */
enum HdeStatus hde_system_certify(const struct HdeSystem *sys,
                                  int64_t lambda_numer,
                                  int64_t lambda_denom,
                                  bool *passed);

/**
 * Loads a modelled code from a `#code v1` file (its system is resolved
 * relative to the file's directory).
 */
enum HdeStatus hde_code_load(const char *path, struct HdeCode **out);

void hde_code_free(struct HdeCode *code);

/**
 * Number of coordinates (vertices) of the code.
 */
enum HdeStatus hde_code_len(const struct HdeCode *code, size_t *len);

/**
 * Weighted rejection rej(c) of the word.
 */
enum HdeStatus hde_code_rej(const struct HdeCode *code,
                            const uint64_t *word,
                            size_t len,
                            struct HdeRational *out);

/**
 * Bit-flip correction in place at δ = numer/denom; writes the flip count.
 */
enum HdeStatus hde_code_correct(const struct HdeCode *code,
                                uint64_t *word,
                                size_t len,
                                int64_t delta_numer,
                                int64_t delta_denom,
                                size_t *flips);

/**
 * Distance-theorem check: writes the bound, the true distance (0/0 when the
 * code has no nonzero codeword) and the verdict.
 */
enum HdeStatus hde_code_distance_check(const struct HdeCode *code,
                                       struct HdeRational *bound,
                                       struct HdeRational *true_distance,
                                       bool *holds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HDE_H */
