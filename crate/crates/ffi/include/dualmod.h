#ifndef DUALMOD_H
#define DUALMOD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. The nonzero codes below 4 match the
 * command-line exit codes.
 */
typedef enum DmStatus {
  DM_STATUS_OK = 0,
  /**
   * Unreadable input or a schema error.
   */
  DM_STATUS_INVALID_INPUT = 1,
  /**
   * The instance violates a structural requirement.
   */
  DM_STATUS_STRUCTURAL = 2,
  /**
   * A value is outside the domain of the operation.
   */
  DM_STATUS_DOMAIN = 3,
  DM_STATUS_NULL_POINTER = 4,
  /**
   * An index argument is out of range.
   */
  DM_STATUS_OUT_OF_RANGE = 5,
  /**
   * Internal failure; please report it.
   */
  DM_STATUS_PANIC = 6,
} DmStatus;

/**
 * The density decomposition of an instance.
 */
typedef struct DmDecomposition DmDecomposition;

/**
 * A validated instance.
 */
typedef struct DmInstance DmInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library from the same thread.
 */
const char *dm_last_error_message(void);

/**
 * Releases a string returned by the library. Null is ignored.
 */
void dm_string_free(char *s);

/**
 * Parses an instance from JSON text.
 */
enum DmStatus dm_instance_from_json(const char *json, struct DmInstance **result);

/**
 * Reads an instance from a JSON file.
 */
enum DmStatus dm_instance_from_file(const char *path, struct DmInstance **result);

/**
 * Serializes an instance back to JSON; free the result with `dm_string_free`.
 */
enum DmStatus dm_instance_to_json(const struct DmInstance *inst, char **result);

void dm_instance_free(struct DmInstance *inst);

/**
 * Number of elements, or 0 for a null handle.
 */
size_t dm_instance_size(const struct DmInstance *inst);

/**
 * Sets `*is_dual_modular` to 1 when `f` is monotone supermodular and `g`
 * strictly monotone submodular, else 0.
 */
enum DmStatus dm_instance_verify(const struct DmInstance *inst, int32_t *is_dual_modular);

enum DmStatus dm_decompose(const struct DmInstance *inst, struct DmDecomposition **result);

void dm_decomposition_free(struct DmDecomposition *dec);

/**
 * Number of parts, or 0 for a null handle.
 */
size_t dm_decomposition_num_parts(const struct DmDecomposition *dec);

/**
 * Part `index` as a bit mask over element indices.
 */
enum DmStatus dm_decomposition_part(const struct DmDecomposition *dec,
                                    size_t index,
                                    uint64_t *mask);

/**
 * Density of part `index` as the nearest double.
 */
enum DmStatus dm_decomposition_density(const struct DmDecomposition *dec,
                                       size_t index,
                                       double *density);

/**
 * Exact density of part `index` as `"p/q"`; free with `dm_string_free`.
 */
enum DmStatus dm_decomposition_density_string(const struct DmDecomposition *dec,
                                              size_t index,
                                              char **result);

/**
 * Copies the per-element density vector into `rho[0..len]`; `len` must be
 * the instance size.
 */
enum DmStatus dm_decomposition_density_vector(const struct DmDecomposition *dec,
                                              double *rho,
                                              size_t len);

/**
 * Runs `iterations` solver steps and writes the final induced densities
 * to `rho[0..len]`. `kind` is `"quadratic"`, `"kl"`, `"eg"` or
 * `"hs:<gamma>"`; `variant` is `"fw"` or `"greedypp"`. A null `phi` is
 * allowed.
 */
enum DmStatus dm_solve(const struct DmInstance *inst,
                       const char *kind,
                       const char *variant,
                       size_t iterations,
                       double *rho,
                       size_t len,
                       double *phi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DUALMOD_H */
