#ifndef HANLE_SIM_H
#define HANLE_SIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum HanleStatus {
  HANLE_STATUS_OK = 0,
  HANLE_STATUS_NULL_POINTER = 1,
  HANLE_STATUS_INVALID_ARGUMENT = 2,
  HANLE_STATUS_INVALID_PARAMETER = 3,
  HANLE_STATUS_SOLVER_FAILURE = 4,
  HANLE_STATUS_INTEGRATION_FAILURE = 5,
  HANLE_STATUS_UNKNOWN_PRESET = 6,
  HANLE_STATUS_PANIC = 7,
} HanleStatus;

// Light polarization.
typedef enum HanlePolarization {
  // Linear, perpendicular to the field (Hanle configuration).
  HANLE_POLARIZATION_LINEAR_X = 0,
  // Linear, along the field.
  HANLE_POLARIZATION_LINEAR_Z = 1,
} HanlePolarization;

// Opaque simulator handle.
typedef struct HanleSimulator HanleSimulator;

// Physical parameters in units of Γ; fields as Larmor frequencies.
typedef struct HanleParams {
  double fg;
  double fe;
  double gg;
  double ge;
  double rabi;
  double detuning;
  double gamma;
  double gamma_coll;
  double branching;
  double b0;
  double b1;
  double mod_freq;
  enum HanlePolarization polarization;
} HanleParams;

// Signals at one static field.
typedef struct HanleSignal {
  double b0;
  double static_signal;
  double inphase;
  double quadrature;
} HanleSignal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length in bytes.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t hanle_last_error(char *buf, size_t len);

// Fills `out` with a named preset at `B0 = 0`.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum HanleStatus hanle_params_preset(const char *name, struct HanleParams *out);

// Creates a simulator. On success `*out` owns a handle that must be passed
// to [`hanle_simulator_free`].
//
// # Safety
// `params` must point to a valid struct; `out` must be writable.
enum HanleStatus hanle_simulator_new(const struct HanleParams *params, struct HanleSimulator **out);

// Releases a simulator. Null is ignored.
//
// # Safety
// `sim` must come from [`hanle_simulator_new`] and not be used afterwards.
void hanle_simulator_free(struct HanleSimulator *sim);

// Static, in-phase and quadrature signals at static field `b0`.
//
// # Safety
// `sim` must be a live handle; `out` must be writable.
enum HanleStatus hanle_simulator_evaluate(const struct HanleSimulator *sim,
                                          double b0,
                                          struct HanleSignal *out);

// Scans `n` static fields. With `doppler_points > 0` every point is averaged
// uniformly over `doppler_points` detunings in `[doppler_min, doppler_max]`.
//
// # Safety
// `b0` must be readable and `out` writable for `n` elements.
enum HanleStatus hanle_simulator_scan(const struct HanleSimulator *sim,
                                      const double *b0,
                                      size_t n,
                                      double doppler_min,
                                      double doppler_max,
                                      size_t doppler_points,
                                      struct HanleSignal *out);

// Wigner 3-j symbol; arguments must be integers or half-integers.
//
// # Safety
// `out` must be writable.
enum HanleStatus hanle_wigner3j(double j1,
                                double j2,
                                double j3,
                                double m1,
                                double m2,
                                double m3,
                                double *out);

// Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}`.
//
// # Safety
// `out` must be writable.
enum HanleStatus hanle_wigner6j(double j1,
                                double j2,
                                double j3,
                                double j4,
                                double j5,
                                double j6,
                                double *out);

// Fraction of spontaneous decays from hyperfine level `fe` (of fine level
// `je`) that end in ground hyperfine level `fg` (of `jg`), nuclear spin `i`.
//
// # Safety
// `out` must be writable.
enum HanleStatus hanle_branching_ratio(double je,
                                       double jg,
                                       double i,
                                       double fe,
                                       double fg,
                                       double *out);

// Library version as a static NUL-terminated string.
const char *hanle_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HANLE_SIM_H */
