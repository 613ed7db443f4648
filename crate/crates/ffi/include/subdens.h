#ifndef SUBDENS_H
#define SUBDENS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Piece rule for [`sd_relator_set_c_prime`]: `|p| < λ|r|`.
 */
#define SD_RULE_CLASSICAL 0

/**
 * Piece rule for [`sd_relator_set_c_prime`]: `|p| ≤ λ|r|`.
 */
#define SD_RULE_NON_STRICT 1

typedef enum SdStatus {
  SD_STATUS_OK = 0,
  SD_STATUS_NULL_POINTER = 1,
  SD_STATUS_INVALID_ARGUMENT = 2,
  SD_STATUS_PARSE = 3,
  SD_STATUS_OVERFLOW = 4,
  SD_STATUS_INTERNAL = 5,
} SdStatus;

typedef struct SdRelatorSet SdRelatorSet;

typedef struct SdSubset SdSubset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *sd_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void sd_string_free(char *s);

/**
 * Uniform `k`-subset of `{0..n-1}`.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_subset_sample_uniform(uint64_t n,
                                       uint64_t k,
                                       uint64_t seed,
                                       uint64_t stream,
                                       struct SdSubset **result);

/**
 * Bernoulli subset with inclusion probability `n^{d-1}`.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_subset_sample_bernoulli(uint64_t n,
                                         double d,
                                         uint64_t seed,
                                         uint64_t stream,
                                         struct SdSubset **result);

/**
 * # Safety
 * `s` must be null or a handle from this library, not yet freed.
 */
void sd_subset_free(struct SdSubset *s);

/**
 * Cardinality of `s`; 0 for a null handle.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
uint64_t sd_subset_len(const struct SdSubset *s);

/**
 * Copies up to `cap` sorted members into `buf`; `written` receives the count.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_subset_members(const struct SdSubset *s,
                                uint64_t *buf,
                                size_t cap,
                                size_t *written);

/**
 * Density `log_n |s|`; negative infinity for the empty set.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_subset_density(const struct SdSubset *s, double *result);

/**
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_subset_intersection_len(const struct SdSubset *a,
                                         const struct SdSubset *b,
                                         uint64_t *result);

/**
 * Exact mean and variance of `|A ∩ B|` for uniform subsets of sizes `ka`, `kb`.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_intersection_moments_uniform(uint64_t n,
                                              uint64_t ka,
                                              uint64_t kb,
                                              double *mean,
                                              double *variance);

/**
 * Threshold constants for rank `m` as a JSON object.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_thresholds_json(uint32_t m, double epsilon, char **result);

/**
 * Decimal count of cyclically reduced words of length exactly `t` over `m`
 * generators; the exact values overflow any fixed-width integer.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_word_count(uint32_t m, size_t t, char **result);

/**
 * Parses a presentation (`rank m` line, then one relator per line).
 *
 * # Safety
 * `text` must be null or a NUL-terminated string.
 */
enum SdStatus sd_relator_set_parse(const char *text, struct SdRelatorSet **result);

/**
 * # Safety
 * `r` must be null or a handle from this library, not yet freed.
 */
void sd_relator_set_free(struct SdRelatorSet *r);

/**
 * Number of relators; 0 for a null handle.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
size_t sd_relator_set_len(const struct SdRelatorSet *r);

/**
 * Largest `|p| / |r|` over pieces `p` hosted by relators `r`.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_relator_set_max_piece_ratio(const struct SdRelatorSet *r, double *result);

/**
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
enum SdStatus sd_relator_set_c_prime(const struct SdRelatorSet *r,
                                     double lambda,
                                     uint32_t rule,
                                     bool *holds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBDENS_H */
