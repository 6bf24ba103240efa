#ifndef RAYLEIGH_MI_H
#define RAYLEIGH_MI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RmiStatus {
  RMI_STATUS_OK = 0,
  RMI_STATUS_DOMAIN = 1,
  RMI_STATUS_INVALID_ARGUMENT = 2,
  RMI_STATUS_CONVERGENCE = 3,
  RMI_STATUS_EVALUATION = 4,
  RMI_STATUS_NULL_POINTER = 5,
  RMI_STATUS_PANIC = 6,
} RmiStatus;

// Opaque quadrature rule.
typedef struct RmiRule RmiRule;

// Mirror of one sweep row; entropies in nats.
typedef struct RmiInfoPoint {
  double omega_sq;
  double snr_db;
  double h_y;
  double h_y_given_x;
  double mutual_info;
  // Nonzero when a slightly negative mutual information was clamped to 0.
  int32_t mi_clamped;
  double c_rcsi;
  double c_cnf;
  double lower_bound;
  double gap_g;
  double h_y_nf;
  double h_y_given_x_nf;
} RmiInfoPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread; empty after a success.
// The pointer stays valid until the next call into this library on the
// same thread.
const char *rmi_last_error_message(void);

// Half-range Gauss-Hermite rule with `q` points (weight `e^{-t^2}` on `[0, inf)`).
//
// # Safety
// `out` must be valid for writes.
enum RmiStatus rmi_rule_half_range(uintptr_t q, struct RmiRule **out);

// Full-range Gauss-Hermite rule with `q` points.
//
// # Safety
// `out` must be valid for writes.
enum RmiStatus rmi_rule_full_range(uintptr_t q, struct RmiRule **out);

// Releases a rule; null is ignored.
//
// # Safety
// `rule` must come from `rmi_rule_*` and not have been freed.
void rmi_rule_free(struct RmiRule *rule);

// Number of points in `rule`.
//
// # Safety
// `rule` must be a live handle; `out` valid for writes.
enum RmiStatus rmi_rule_len(const struct RmiRule *rule, uintptr_t *out);

// Copies the nodes (increasing) into `buf`, which must hold at least the
// rule length.
//
// # Safety
// `rule` must be a live handle; `buf` valid for `len` writes.
enum RmiStatus rmi_rule_nodes(const struct RmiRule *rule, double *buf, uintptr_t len);

// Copies the weights into `buf`.
//
// # Safety
// `rule` must be a live handle; `buf` valid for `len` writes.
enum RmiStatus rmi_rule_weights(const struct RmiRule *rule, double *buf, uintptr_t len);

// Exponential integral `Ei(x)`, `x != 0`.
//
// # Safety
// `out` must be valid for writes.
enum RmiStatus rmi_exp_integral_ei(double x, double *out);

// Coherent-receiver capacity `-e^{1/s} Ei(-1/s)`.
//
// # Safety
// `out` must be valid for writes.
enum RmiStatus rmi_c_rcsi(double omega_sq, double *out);

// Non-fading capacity `ln(1 + s)`.
//
// # Safety
// `out` must be valid for writes.
enum RmiStatus rmi_c_cnf(double omega_sq, double *out);

// Analytical lower bound on the Gaussian-input mutual information.
//
// # Safety
// `out` must be valid for writes.
enum RmiStatus rmi_lower_bound(double omega_sq, double *out);

// Output entropy `h(Y)` with half-range rules `outer` and `inner`.
//
// # Safety
// Both rules must be live handles; `out` valid for writes.
enum RmiStatus rmi_h_y(double omega_sq,
                       const struct RmiRule *outer,
                       const struct RmiRule *inner,
                       double *out);

// Gaussian-input mutual information (nats).
//
// # Safety
// Both rules must be live handles; `out` valid for writes.
enum RmiStatus rmi_mutual_information(double omega_sq,
                                      const struct RmiRule *outer,
                                      const struct RmiRule *inner,
                                      double *out);

// Every per-SNR quantity at once.
//
// # Safety
// Both rules must be live handles; `out` valid for writes.
enum RmiStatus rmi_info_point(double omega_sq,
                              const struct RmiRule *outer,
                              const struct RmiRule *inner,
                              struct RmiInfoPoint *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAYLEIGH_MI_H */
