#ifndef RBOTT_H
#define RBOTT_H

/* Generated by cbindgen from the rbott-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. Mirrors the CLI exit-code contract.
 */
typedef enum RbottStatus {
  /**
   * Success.
   */
  RBOTT_STATUS_OK = 0,
  /**
   * Well-formed negative answer (the matrices are not equivalent).
   */
  RBOTT_STATUS_NOT_EQUIVALENT = 1,
  /**
   * A resource limit stopped the computation.
   */
  RBOTT_STATUS_RESOURCE_LIMIT = 2,
  /**
   * The request is outside the configured bounds.
   */
  RBOTT_STATUS_CONFIG_BOUND = 3,
  /**
   * The input text does not parse.
   */
  RBOTT_STATUS_PARSE_ERROR = 4,
  /**
   * A pointer argument was null or otherwise unusable.
   */
  RBOTT_STATUS_INVALID_ARGUMENT = 5,
  /**
   * An internal invariant failed.
   */
  RBOTT_STATUS_INTERNAL = 6,
} RbottStatus;

/**
 * Opaque handle to a strictly upper-triangular (0,1) matrix.
 */
typedef struct RbottMatrix RbottMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a matrix from BMAT text (`n` line plus n rows of 0/1 characters)
 * or the compact `b{n}:hex` form.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RbottStatus rbott_matrix_parse(const char *text, struct RbottMatrix **out);

/**
 * Releases a handle returned by this library. Null is ignored.
 *
 * # Safety
 * `matrix` must have come from this library and not been freed before.
 */
void rbott_matrix_free(struct RbottMatrix *matrix);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `text` must have come from this library and not been freed before.
 */
void rbott_string_free(char *text);

/**
 * Matrix size; 0 for a null handle.
 *
 * # Safety
 * `matrix` must be a live handle or null.
 */
uint32_t rbott_matrix_dim(const struct RbottMatrix *matrix);

/**
 * Renders the BMAT text form.
 *
 * # Safety
 * `matrix` must be a live handle; `out` a valid pointer.
 */
enum RbottStatus rbott_matrix_render(const struct RbottMatrix *matrix, char **out);

/**
 * Renders the compact `b{n}:hex` form.
 *
 * # Safety
 * `matrix` must be a live handle; `out` a valid pointer.
 */
enum RbottStatus rbott_matrix_compact(const struct RbottMatrix *matrix, char **out);

/**
 * Computes the canonical representative of the matrix's equivalence class.
 *
 * # Safety
 * `matrix` must be a live handle; `out` a valid pointer.
 */
enum RbottStatus rbott_canonical_form(const struct RbottMatrix *matrix, struct RbottMatrix **out);

/**
 * Decides equivalence; writes 1 or 0 through `out_equivalent`.
 *
 * # Safety
 * `a` and `b` must be live handles; `out_equivalent` a valid pointer.
 */
enum RbottStatus rbott_equivalent(const struct RbottMatrix *a,
                                  const struct RbottMatrix *b,
                                  int32_t *out_equivalent);

/**
 * Decides equivalence and, when equivalent, writes the move sequence as a
 * `"; "`-joined string ("(identity)" for equal inputs). Returns the
 * not-equivalent status (no string) otherwise.
 *
 * # Safety
 * `a` and `b` must be live handles; `out_witness` a valid pointer.
 */
enum RbottStatus rbott_equivalence_witness(const struct RbottMatrix *a,
                                           const struct RbottMatrix *b,
                                           char **out_witness);

/**
 * Number of equivalence classes of the whole size-n family.
 *
 * # Safety
 * `out_count` must be a valid pointer.
 */
enum RbottStatus rbott_class_count(uint32_t n, uint64_t *out_count);

/**
 * Factors the matrix: writes the circle-factor count and the factors as a
 * comma-joined list of compact forms (empty string when there are none).
 *
 * # Safety
 * `matrix` must be a live handle; both out-pointers valid.
 */
enum RbottStatus rbott_decompose(const struct RbottMatrix *matrix,
                                 uint32_t *out_exterior_rank,
                                 char **out_factors);

/**
 * Writes the invariant fingerprint of the matrix's cohomology ring as a
 * human-readable string.
 *
 * # Safety
 * `matrix` must be a live handle; `out` a valid pointer.
 */
enum RbottStatus rbott_fingerprint(const struct RbottMatrix *matrix, char **out);

/**
 * Static name of a status code; never freed by the caller.
 */
const char *rbott_status_name(enum RbottStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RBOTT_H */
