#ifndef ORBIFROB_H
#define ORBIFROB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OrbifrobStatus {
  ORBIFROB_STATUS_OK = 0,
  ORBIFROB_STATUS_INVALID = 1,
  ORBIFROB_STATUS_UNKNOWN_VARIABLE = 2,
  ORBIFROB_STATUS_RESOURCE = 3,
  ORBIFROB_STATUS_DEGENERATE = 4,
  ORBIFROB_STATUS_SOLVE = 5,
  ORBIFROB_STATUS_IO = 6,
  ORBIFROB_STATUS_NULL_POINTER = 7,
  ORBIFROB_STATUS_PANIC = 8,
} OrbifrobStatus;

typedef enum OrbifrobFamily {
  ORBIFROB_FAMILY_A = 0,
  ORBIFROB_FAMILY_D = 1,
  ORBIFROB_FAMILY_E = 2,
  ORBIFROB_FAMILY_NON_POLYNOMIAL = 3,
} OrbifrobFamily;

/**
 * Hurwitz engine with its optional cache.
 */
typedef struct OrbifrobEngine OrbifrobEngine;

/**
 * Genus-g potential of an orbicurve.
 */
typedef struct OrbifrobPotential OrbifrobPotential;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failure on this thread, or NULL. Valid until the next failing call.
 */
const char *orbifrob_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void orbifrob_string_free(char *s);

/**
 * Engine with a cache file at `cache_path` (NULL for none) and a degree cap (0 for the default).
 *
 * # Safety
 * `cache_path` is NULL or a NUL-terminated string; `out` is writable.
 */
enum OrbifrobStatus orbifrob_engine_new(const char *cache_path,
                                        uint32_t max_degree,
                                        struct OrbifrobEngine **out);

/**
 * # Safety
 * `engine` comes from [`orbifrob_engine_new`] or is NULL.
 */
void orbifrob_engine_free(struct OrbifrobEngine *engine);

/**
 * Hurwitz number as a "num/den" string; `profiles` looks like "(2,1);(3)".
 *
 * # Safety
 * Pointers must be valid; `*out` receives a string for [`orbifrob_string_free`].
 */
enum OrbifrobStatus orbifrob_hurwitz_number(const struct OrbifrobEngine *engine,
                                            uint32_t base_genus,
                                            int64_t genus,
                                            uint32_t degree,
                                            const char *profiles,
                                            bool connected,
                                            char **out);

/**
 * # Safety
 * `orders` holds `len` values; the out pointers are writable.
 */
enum OrbifrobStatus orbifrob_classify(const uint32_t *orders,
                                      size_t len,
                                      bool *polynomial,
                                      enum OrbifrobFamily *family);

/**
 * Genus-`genus` potential of the sphere with the given cone orders, from the tabulated caps.
 * `max_q_degree = 0` keeps every degree, which needs a polynomial sphere.
 *
 * # Safety
 * `orders` holds `len` values; `out` is writable.
 */
enum OrbifrobStatus orbifrob_potential_assemble(const struct OrbifrobEngine *engine,
                                                const uint32_t *orders,
                                                size_t len,
                                                uint32_t genus,
                                                uint32_t max_q_degree,
                                                struct OrbifrobPotential **out);

/**
 * # Safety
 * `json` is a NUL-terminated string; `out` is writable.
 */
enum OrbifrobStatus orbifrob_potential_from_json(const char *json, struct OrbifrobPotential **out);

/**
 * # Safety
 * `f` is a live potential; `*out` receives a string for [`orbifrob_string_free`].
 */
enum OrbifrobStatus orbifrob_potential_to_json(const struct OrbifrobPotential *f, char **out);

/**
 * Number of WDVV equations the potential violates.
 *
 * # Safety
 * `f` is a live potential; `out` is writable.
 */
enum OrbifrobStatus orbifrob_potential_wdvv_violations(const struct OrbifrobPotential *f,
                                                       size_t *out);

/**
 * # Safety
 * `f` comes from this library or is NULL.
 */
void orbifrob_potential_free(struct OrbifrobPotential *f);

/**
 * Mirror comparison for the tri-polynomial family `(p,q,r)`; the JSON report goes to `*report`
 * (pass NULL to skip it).
 *
 * # Safety
 * `passed` is writable; `report` is NULL or writable.
 */
enum OrbifrobStatus orbifrob_mirror_check(const struct OrbifrobEngine *engine,
                                          uint32_t p,
                                          uint32_t q,
                                          uint32_t r,
                                          bool *passed,
                                          char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBIFROB_H */
