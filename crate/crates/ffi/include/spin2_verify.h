#ifndef SPIN2_VERIFY_H
#define SPIN2_VERIFY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum Spin2Status {
  SPIN2_STATUS_OK = 0,
  SPIN2_STATUS_NULL_POINTER = 1,
  SPIN2_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Point outside the chart's valid region, or a degenerate metric.
   */
  SPIN2_STATUS_DOMAIN = 3,
  SPIN2_STATUS_JET_DEPTH = 4,
  /**
   * Unknown metric, bad parameter or invalid scenario config.
   */
  SPIN2_STATUS_CONFIG = 5,
  SPIN2_STATUS_PANIC = 6,
} Spin2Status;

typedef struct Spin2Chart Spin2Chart;

typedef struct Spin2Generator Spin2Generator;

/**
 * Per-point gauge residual summary. Deviations and magnitudes are relative
 * to the summand scale.
 */
typedef struct Spin2GaugeResult {
  double scalar_deviation;
  double scalar_magnitude;
  double rank2_deviation;
  double rank2_magnitude;
  /**
   * Residual at the requested coupling against its closed form.
   */
  double nonminimal_deviation;
  double nonminimal_magnitude;
  /**
   * Worst structural invariant of the gauge multiplet.
   */
  double structural;
} Spin2GaugeResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *spin2_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *spin2_version(void);

/**
 * Creates a catalog chart. `keys` and `values` hold `n_params` metric
 * parameters and may be null when `n_params` is 0.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `keys` and `values` must point to
 * `n_params` entries; `out` must be writable.
 */
enum Spin2Status spin2_chart_new(const char *name,
                                 const char *const *keys,
                                 const double *values,
                                 size_t n_params,
                                 struct Spin2Chart **out);

/**
 * # Safety
 * `chart` must come from [`spin2_chart_new`] and not be freed twice.
 */
void spin2_chart_free(struct Spin2Chart *chart);

/**
 * Seeded random generator of total degree `degree` (at most 4). With
 * `trig` set, each component is multiplied by a shared trigonometric factor.
 *
 * # Safety
 * `out` must be writable.
 */
enum Spin2Status spin2_generator_random(uint64_t seed,
                                        uint32_t degree,
                                        bool trig,
                                        struct Spin2Generator **out);

/**
 * # Safety
 * `generator` must come from [`spin2_generator_random`] and not be freed twice.
 */
void spin2_generator_free(struct Spin2Generator *generator);

/**
 * `Γ^λ_{μν}` at `point[4]` into `out[64]`, index `λ*16 + μ*4 + ν`.
 *
 * # Safety
 * `chart` must be a live handle, `point` must hold 4 and `out` 64 doubles.
 */
enum Spin2Status spin2_christoffel(const struct Spin2Chart *chart,
                                   const double *point,
                                   double *out);

/**
 * `R^ρ_{σμν}` into `out[256]`, index `ρ*64 + σ*16 + μ*4 + ν`.
 *
 * # Safety
 * `chart` must be a live handle, `point` must hold 4 and `out` 256 doubles.
 */
enum Spin2Status spin2_riemann(const struct Spin2Chart *chart, const double *point, double *out);

/**
 * `R_{αβ}` into `out[16]`, index `α*4 + β`.
 *
 * # Safety
 * `chart` must be a live handle, `point` must hold 4 and `out` 16 doubles.
 */
enum Spin2Status spin2_ricci(const struct Spin2Chart *chart, const double *point, double *out);

/**
 * Builds the gauge multiplet of `generator` at `point` and compares each
 * field-equation residual with its closed-form obstruction.
 *
 * # Safety
 * Handles must be live, `point` must hold 4 doubles, `out` must be writable.
 */
enum Spin2Status spin2_evaluate_gauge(const struct Spin2Chart *chart,
                                      const struct Spin2Generator *generator,
                                      const double *point,
                                      double coupling,
                                      struct Spin2GaugeResult *out);

/**
 * Runs a JSON scenario config. On success `*out_json` receives the report,
 * to be released with [`spin2_string_free`], and `*out_passed` the overall
 * verdict.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; both outputs must be writable.
 */
enum Spin2Status spin2_run_config(const char *config_json, char **out_json, bool *out_passed);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void spin2_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPIN2_VERIFY_H */
