#ifndef O2BASIS_H
#define O2BASIS_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum O2bStatus {
  O2B_STATUS_OK = 0,
  O2B_STATUS_NULL_POINTER = 1,
  O2B_STATUS_INVALID_UTF8 = 2,
  /**
   * Unknown preset, unparsable input or a bad argument value.
   */
  O2B_STATUS_USAGE = 3,
  /**
   * An exactness or verification check failed.
   */
  O2B_STATUS_INTERNAL = 4,
  O2B_STATUS_OUT_OF_RANGE = 5,
} O2bStatus;

typedef enum O2bGroup {
  O2B_GROUP_SO2 = 0,
  O2B_GROUP_O2 = 1,
} O2bGroup;

typedef enum O2bMode {
  O2B_MODE_INVARIANTS = 0,
  O2B_MODE_COVARIANTS = 1,
} O2bMode;

/**
 * A computed minimal integrity basis.
 */
typedef struct O2bBasis O2bBasis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Compute the minimal basis of `input`: a preset name (`ela`), a signature
 * (`H:0*2,2,4`) or a symmetry spec (`T4 sym=(12),(34)`). `group` is an
 * [`O2bGroup`] value and `mode` an [`O2bMode`] value. On success `*out`
 * owns a handle to free with [`o2b_basis_free`].
 *
 * # Safety
 * `input` must be a NUL-terminated string and `out` a valid pointer.
 */
enum O2bStatus o2b_basis_compute(const char *input,
                                 int32_t group,
                                 int32_t mode,
                                 struct O2bBasis **out);

/**
 * # Safety
 * `basis` must come from [`o2b_basis_compute`] and not be used afterwards.
 */
void o2b_basis_free(struct O2bBasis *basis);

/**
 * Number of generators.
 *
 * # Safety
 * `basis` must be a live handle and `out` a valid pointer.
 */
enum O2bStatus o2b_basis_len(const struct O2bBasis *basis, size_t *out);

/**
 * Number of generators of covariant order 0.
 *
 * # Safety
 * `basis` must be a live handle and `out` a valid pointer.
 */
enum O2bStatus o2b_basis_invariant_count(const struct O2bBasis *basis, size_t *out);

/**
 * Covariant order and polynomial degree of generator `index` (0-based).
 *
 * # Safety
 * `basis` must be a live handle; `order` and `degree` valid pointers.
 */
enum O2bStatus o2b_generator_grading(const struct O2bBasis *basis,
                                     size_t index,
                                     uint32_t *order,
                                     uint32_t *degree);

/**
 * Whether generator `index` changes sign under a reflection.
 *
 * # Safety
 * `basis` must be a live handle and `out` a valid pointer.
 */
enum O2bStatus o2b_generator_is_hemitropic(const struct O2bBasis *basis, size_t index, bool *out);

/**
 * Complex formula of generator `index`, e.g. `Re(z₂²z̄₄)`.
 *
 * # Safety
 * `basis` must be a live handle and `out` a valid pointer; free the string
 * with [`o2b_string_free`].
 */
enum O2bStatus o2b_generator_formula(const struct O2bBasis *basis,
                                     size_t index,
                                     bool ascii,
                                     char **out);

/**
 * Tensorial formula of generator `index`: the ASCII expression grammar when
 * `ascii`, otherwise the typeset notation.
 *
 * # Safety
 * As for [`o2b_generator_formula`].
 */
enum O2bStatus o2b_generator_tensorial(const struct O2bBasis *basis,
                                       size_t index,
                                       bool ascii,
                                       char **out);

/**
 * Check every tensorial formula on `trials` random rational assignments.
 *
 * # Safety
 * `basis` must be a live handle.
 */
enum O2bStatus o2b_basis_verify(const struct O2bBasis *basis, size_t trials);

/**
 * The versioned JSON report of the basis.
 *
 * # Safety
 * `basis` must be a live handle and `out` a valid pointer; free the string
 * with [`o2b_string_free`].
 */
enum O2bStatus o2b_basis_to_json(const struct O2bBasis *basis, char **out);

/**
 * Dimension of the space of invariants of multidegree `k` for harmonic
 * factors of the given `orders` (both of length `r`).
 *
 * # Safety
 * `orders` and `k` must point to `r` values; `out` must be valid.
 */
enum O2bStatus o2b_hilbert_dimension(const uint32_t *orders,
                                     const uint32_t *k,
                                     size_t r,
                                     int32_t group,
                                     uint64_t *out);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void o2b_string_free(char *s);

/**
 * Message of the last failure on this thread (empty if none). The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *o2b_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* O2BASIS_H */
