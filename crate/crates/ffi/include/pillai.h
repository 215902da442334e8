#ifndef PILLAI_H
#define PILLAI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PillaiStatus {
  PILLAI_STATUS_OK = 0,
  PILLAI_STATUS_NULL_POINTER = 1,
  PILLAI_STATUS_INVALID_ARGUMENT = 2,
  PILLAI_STATUS_PRECISION_EXHAUSTED = 3,
  PILLAI_STATUS_COMPUTATION_FAILED = 4,
  PILLAI_STATUS_BUFFER_TOO_SMALL = 5,
  PILLAI_STATUS_OUT_OF_RANGE = 6,
  PILLAI_STATUS_PANIC = 7,
} PillaiStatus;

// Which logarithm ratio to expand.
typedef enum PillaiTau {
  // `log delta / log alpha`
  PILLAI_TAU_DELTA_OVER_ALPHA = 0,
  // `log alpha / log delta`
  PILLAI_TAU_ALPHA_OVER_DELTA = 1,
} PillaiTau;

// Result of the full pipeline.
typedef struct PillaiCertificate PillaiCertificate;

// Partial quotients of a logarithm ratio.
typedef struct PillaiContinuedFraction PillaiContinuedFraction;

// Records `c` with several representations `P_m - F_n = c`.
typedef struct PillaiSearch PillaiSearch;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// NUL-terminated message of the last failure on this thread; empty if none.
// The pointer stays valid until the next failing call on the same thread.
const char *pillai_last_error(void);

// Library version as a static NUL-terminated string.
const char *pillai_version(void);

// Enumerate `4 <= m <= m_max`, `2 <= n <= n_max` and keep values with at
// least `min_reps` representations.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum PillaiStatus pillai_search_new(uint64_t m_max,
                                    uint64_t n_max,
                                    uint32_t min_reps,
                                    struct PillaiSearch **out);

// # Safety
// `h` must come from [`pillai_search_new`] and not be used afterwards.
void pillai_search_free(struct PillaiSearch *h);

// Number of records; 0 for a null handle.
//
// # Safety
// `h` must be null or a live search handle.
size_t pillai_search_len(const struct PillaiSearch *h);

// The value `c` of record `i`, when it fits in 64 bits.
//
// # Safety
// `h` must be a live search handle, `c` writable.
enum PillaiStatus pillai_search_value(const struct PillaiSearch *h, size_t i, int64_t *c);

// The value `c` of record `i` in decimal.
//
// # Safety
// `h` must be a live search handle; `buf` must hold `len` bytes; `needed`
// may be null.
enum PillaiStatus pillai_search_value_str(const struct PillaiSearch *h,
                                          size_t i,
                                          char *buf,
                                          size_t len,
                                          size_t *needed);

// Number of `(m, n)` pairs of record `i`.
//
// # Safety
// `h` must be a live search handle, `count` writable.
enum PillaiStatus pillai_search_pair_count(const struct PillaiSearch *h, size_t i, size_t *count);

// Pair `j` of record `i`, pairs sorted by `m`.
//
// # Safety
// `h` must be a live search handle, `m` and `n` writable.
enum PillaiStatus pillai_search_pair(const struct PillaiSearch *h,
                                     size_t i,
                                     size_t j,
                                     uint64_t *m,
                                     uint64_t *n);

// Expand `count` partial quotients. `precision_bits == 0` starts at 512
// bits and escalates as needed; otherwise the precision is fixed.
//
// # Safety
// `out` must be writable.
enum PillaiStatus pillai_cf_new(enum PillaiTau tau,
                                size_t count,
                                uint32_t precision_bits,
                                struct PillaiContinuedFraction **out);

// # Safety
// `h` must come from [`pillai_cf_new`] and not be used afterwards.
void pillai_cf_free(struct PillaiContinuedFraction *h);

// # Safety
// `h` must be null or a live handle.
size_t pillai_cf_len(const struct PillaiContinuedFraction *h);

// Partial quotient `i`; `a_0` is index 0.
//
// # Safety
// `h` must be a live handle, `value` writable.
enum PillaiStatus pillai_cf_quotient(const struct PillaiContinuedFraction *h,
                                     size_t i,
                                     uint64_t *value);

// Run the whole pipeline. `precision_bits` as for [`pillai_cf_new`].
// A completed run whose theorem check fails still yields a handle; query
// [`pillai_certificate_passed`].
//
// # Safety
// `out` must be writable.
enum PillaiStatus pillai_certificate_run(uint32_t precision_bits, struct PillaiCertificate **out);

// # Safety
// `h` must come from [`pillai_certificate_run`] and not be used afterwards.
void pillai_certificate_free(struct PillaiCertificate *h);

// 1 if the reduced bound is within the search and the search matched, 0
// otherwise or for a null handle.
//
// # Safety
// `h` must be null or a live handle.
int32_t pillai_certificate_passed(const struct PillaiCertificate *h);

// Reduced bound: every solution has `n` below this.
//
// # Safety
// `h` must be a live handle, `bound` writable.
enum PillaiStatus pillai_certificate_final_bound(const struct PillaiCertificate *h,
                                                 uint64_t *bound);

// The certificate as pretty-printed JSON.
//
// # Safety
// `h` must be a live handle; `buf` must hold `len` bytes; `needed` may be null.
enum PillaiStatus pillai_certificate_json(const struct PillaiCertificate *h,
                                          char *buf,
                                          size_t len,
                                          size_t *needed);

// The certificate digest, 64 hex characters.
//
// # Safety
// As for [`pillai_certificate_json`].
enum PillaiStatus pillai_certificate_digest(const struct PillaiCertificate *h,
                                            char *buf,
                                            size_t len,
                                            size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PILLAI_H */
