#ifndef HVNOGO_H
#define HVNOGO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HvStatus {
  HV_STATUS_OK = 0,
  HV_STATUS_NULL_POINTER = 1,
  HV_STATUS_INVALID_UTF8 = 2,
  HV_STATUS_INVALID_ARGUMENT = 3,
  HV_STATUS_MALFORMED_INPUT = 4,
  HV_STATUS_BUDGET_EXCEEDED = 5,
  HV_STATUS_PANIC = 6,
} HvStatus;

typedef enum HvDropMode {
  HV_DROP_MODE_INDEPENDENCE = 0,
  HV_DROP_MODE_OBJECTIVITY = 1,
  HV_DROP_MODE_DETERMINISM = 2,
} HvDropMode;

/**
 * A settings family under construction: `e_p`, `e_w` and zero or more settings.
 */
typedef struct HvFamily HvFamily;

/**
 * Result of a triple check.
 */
typedef struct HvReport HvReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The most recent error on this thread, or NULL. Free with [`hv_string_free`].
 */
char *hv_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void hv_string_free(char *s);

/**
 * Creates an empty family; add settings with [`hv_family_add_setting`].
 *
 * # Safety
 * `e_p` and `e_w` must be NUL-terminated strings; `out` must be writable.
 */
enum HvStatus hv_family_new(const char *e_p, const char *e_w, struct HvFamily **out);

/**
 * Parses the JSON form `{"e_p": .., "e_w": .., "settings": [{"label": .., "x": ..}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HvStatus hv_family_from_json(const char *json, struct HvFamily **out);

/**
 * Appends a setting. Labels must be unique and `x` must lie in `[0, 1]`.
 *
 * # Safety
 * `family` must be a live handle; `label` and `x` NUL-terminated strings.
 */
enum HvStatus hv_family_add_setting(struct HvFamily *family, const char *label, const char *x);

/**
 * Number of settings, or 0 for NULL.
 *
 * # Safety
 * `family` must be NULL or a live handle.
 */
size_t hv_family_len(const struct HvFamily *family);

/**
 * # Safety
 * `family` must be NULL or a handle not yet freed.
 */
void hv_family_free(struct HvFamily *family);

/**
 * Decides whether one deterministic, setting-independent, objective table
 * reproduces every setting. Infeasibility is a result, not an error.
 *
 * # Safety
 * `family` must be a live handle; `out` must be writable.
 */
enum HvStatus hv_check_triple(const struct HvFamily *family, struct HvReport **out);

/**
 * 1 if feasible, 0 if infeasible, -1 for NULL.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
int32_t hv_report_is_feasible(const struct HvReport *report);

/**
 * The report as JSON. Free the string with [`hv_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum HvStatus hv_report_to_json(const struct HvReport *report, char **out);

/**
 * # Safety
 * `report` must be NULL or a handle not yet freed.
 */
void hv_report_free(struct HvReport *report);

/**
 * Builds the model that drops one assumption and validates it, as JSON
 * `{"model": .., "validation": ..}`. `atom_budget` caps the objectivity-free
 * model; 0 selects the default.
 *
 * # Safety
 * `family` must be a live handle; `out` must be writable.
 */
enum HvStatus hv_witness_json(const struct HvFamily *family,
                              enum HvDropMode mode,
                              uint64_t atom_budget,
                              char **out);

/**
 * Quantum joint `p(a, b)` in the order 00, 01, 10, 11. Angles in radians.
 *
 * # Safety
 * `out` must point to 4 writable doubles.
 */
enum HvStatus hv_quantum_joint(double alpha, double phi, double *out);

/**
 * Reduced parameters `x, e_p, e_w`.
 *
 * # Safety
 * `out` must point to 3 writable doubles.
 */
enum HvStatus hv_quantum_params(double alpha, double phi, double *out);

/**
 * Draws `n` events from `joint` (4 doubles, order 00, 01, 10, 11) and
 * writes the counts. Identical `(joint, n, seed)` give identical counts.
 *
 * # Safety
 * `joint` must point to 4 readable doubles and `out` to 4 writable `uint64_t`.
 */
enum HvStatus hv_sample_events(const double *joint, uint64_t n, uint64_t seed, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HVNOGO_H */
