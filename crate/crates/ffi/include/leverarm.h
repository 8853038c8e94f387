#ifndef LEVERARM_H
#define LEVERARM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum LeverarmStatus {
  LEVERARM_STATUS_OK = 0,
  LEVERARM_STATUS_INVALID_ARGUMENT = 1,
  LEVERARM_STATUS_NULL_POINTER = 2,
  LEVERARM_STATUS_NON_UNIT_QUATERNION = 3,
  LEVERARM_STATUS_BUFFER_TOO_SMALL = 4,
  LEVERARM_STATUS_POLE_ON_AXIS = 5,
  LEVERARM_STATUS_INTERNAL = 99,
} LeverarmStatus;

/**
 * Opaque running estimator.
 */
typedef struct LeverarmFilter LeverarmFilter;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a Mahony filter. `q0` may be null for the identity.
 *
 * # Safety
 * `q0` is null or points to 4 doubles; `out` points to writable storage.
 */
enum LeverarmStatus leverarm_filter_new_mahony(double kp,
                                               double ki,
                                               const double *q0,
                                               struct LeverarmFilter **out);

/**
 * Creates a Madgwick filter. `q0` may be null for the identity.
 *
 * # Safety
 * `q0` is null or points to 4 doubles; `out` points to writable storage.
 */
enum LeverarmStatus leverarm_filter_new_madgwick(double beta,
                                                 const double *q0,
                                                 struct LeverarmFilter **out);

/**
 * Creates the memoryless atan2 roll estimator.
 *
 * # Safety
 * `out` points to writable storage.
 */
enum LeverarmStatus leverarm_filter_new_atan2(struct LeverarmFilter **out);

/**
 * Releases a filter. Null is ignored.
 *
 * # Safety
 * `filter` is null or was returned by a `leverarm_filter_new_*` function and
 * has not been freed.
 */
void leverarm_filter_free(struct LeverarmFilter *filter);

/**
 * Advances the filter by `dt` seconds with one sample.
 *
 * # Safety
 * `filter` is a live handle; `accel` and `gyro` point to 3 doubles each.
 */
enum LeverarmStatus leverarm_filter_update(struct LeverarmFilter *filter,
                                           const double *accel,
                                           const double *gyro,
                                           double dt);

/**
 * Current estimate as `[w, x, y, z]`.
 *
 * # Safety
 * `filter` is a live handle; `q_out` points to 4 writable doubles.
 */
enum LeverarmStatus leverarm_filter_quaternion(const struct LeverarmFilter *filter, double *q_out);

/**
 * Current estimate as `[roll, pitch, yaw]`, rad.
 *
 * # Safety
 * `filter` is a live handle; `euler_out` points to 3 writable doubles.
 */
enum LeverarmStatus leverarm_filter_euler(const struct LeverarmFilter *filter, double *euler_out);

/**
 * Accelerometer (g) and gyroscope (rad/s) reading of an IMU at height `l`
 * on a body rolling with the given angle, rate and acceleration.
 *
 * # Safety
 * `accel_out` and `gyro_out` point to 3 writable doubles each.
 */
enum LeverarmStatus leverarm_measure(double lever_arm,
                                     double gravity,
                                     double phi,
                                     double phi_dot,
                                     double phi_ddot,
                                     double *accel_out,
                                     double *gyro_out);

/**
 * Zeros of the linearized atan2 roll estimator. `*count` receives the number
 * of zeros (0 or 2) even when the buffers are too small.
 *
 * # Safety
 * `re_out`/`im_out` point to `capacity` writable doubles; `count` is writable.
 */
enum LeverarmStatus leverarm_atan_zeros(double phi_op,
                                        double lever_arm,
                                        double gravity,
                                        double *re_out,
                                        double *im_out,
                                        size_t capacity,
                                        size_t *count);

/**
 * Zeros of the linearized integrator-free Mahony roll estimator.
 *
 * # Safety
 * As for [`leverarm_atan_zeros`].
 */
enum LeverarmStatus leverarm_mahony_zeros(double phi_op,
                                          double lever_arm,
                                          double gravity,
                                          double kp,
                                          double *re_out,
                                          double *im_out,
                                          size_t capacity,
                                          size_t *count);

/**
 * Mahony roll transfer function coefficients, ascending powers of `s`.
 * `num_out` needs room for 4 doubles and `den_out` for 3; the used lengths
 * are written to `num_len` and `den_len`.
 *
 * # Safety
 * Pointers are writable with the sizes above.
 */
enum LeverarmStatus leverarm_mahony_tf(double phi_op,
                                       double lever_arm,
                                       double gravity,
                                       double kp,
                                       double ki,
                                       double *num_out,
                                       size_t *num_len,
                                       double *den_out,
                                       size_t *den_len);

/**
 * `num(iω)/den(iω)` for ascending coefficient arrays.
 *
 * # Safety
 * `num`/`den` point to `num_len`/`den_len` doubles; `re_out`, `im_out` are writable.
 */
enum LeverarmStatus leverarm_freq_response(const double *num,
                                           size_t num_len,
                                           const double *den,
                                           size_t den_len,
                                           double omega,
                                           double *re_out,
                                           double *im_out);

/**
 * Static, NUL-terminated description of a status code.
 */
const char *leverarm_status_message(enum LeverarmStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEVERARM_H */
