#ifndef TRIWELL_H
#define TRIWELL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum TwStatus {
  TW_STATUS_OK = 0,
  TW_STATUS_NULL_POINTER = 1,
  TW_STATUS_INVALID_INPUT = 2,
  TW_STATUS_DOMAIN = 3,
  TW_STATUS_BUFFER_SIZE = 4,
  TW_STATUS_NUMERIC = 5,
  TW_STATUS_IO = 6,
  TW_STATUS_PANIC = 7,
} TwStatus;

/**
 * Diagonalized Hamiltonian with its Fock basis.
 */
typedef struct TwEigenSystem TwEigenSystem;

/**
 * Sampled classical trajectory.
 */
typedef struct TwTrajectory TwTrajectory;

/**
 * Model parameters `(U, J, epsilon, N)`.
 */
typedef struct TwModelParams {
  double u;
  double j;
  double epsilon;
  size_t n;
} TwModelParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a
 * successful one. Valid until the next call on the same thread.
 */
const char *tw_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tw_version(void);

/**
 * Number of Fock states `(N+1)(N+2)/2`.
 */
size_t tw_dimension(size_t n);

/**
 * Position of `|n1, N - n1 - n3, n3>` in the basis order.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum TwStatus tw_fock_index(size_t n, size_t n1, size_t n3, size_t *out);

/**
 * Builds and diagonalizes the Hamiltonian.
 *
 * # Safety
 * `p` must point to valid parameters and `out` be valid for one write.
 */
enum TwStatus tw_eigensystem_new(const struct TwModelParams *p, struct TwEigenSystem **out);

/**
 * Like [`tw_eigensystem_new`] but reads and writes the on-disk cache in
 * `cache_dir` (UTF-8 path).
 *
 * # Safety
 * `cache_dir` must be a NUL-terminated string; see [`tw_eigensystem_new`].
 */
enum TwStatus tw_eigensystem_load_or_build(const struct TwModelParams *p,
                                           const char *cache_dir,
                                           struct TwEigenSystem **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `es` must come from this library and not be used afterwards.
 */
void tw_eigensystem_free(struct TwEigenSystem *es);

/**
 * Dimension of the eigensystem; 0 for a null handle.
 *
 * # Safety
 * `es` must be null or a live handle.
 */
size_t tw_eigensystem_dim(const struct TwEigenSystem *es);

/**
 * Ascending eigenvalues into `out[0..len]`, `len` equal to the dimension.
 *
 * # Safety
 * `es` must be a live handle and `out` valid for `len` writes.
 */
enum TwStatus tw_eigensystem_energies(const struct TwEigenSystem *es, double *out, size_t len);

/**
 * Squared components of eigenvector `k` in basis order.
 *
 * # Safety
 * As for [`tw_eigensystem_energies`].
 */
enum TwStatus tw_fock_projection(const struct TwEigenSystem *es, size_t k, double *out, size_t len);

/**
 * Coherent-state projection of eigenvector `k` in basis order.
 *
 * # Safety
 * As for [`tw_eigensystem_energies`].
 */
enum TwStatus tw_husimi_projection(const struct TwEigenSystem *es,
                                   size_t k,
                                   double *out,
                                   size_t len);

/**
 * Populations `(n1, n3)` of the `rho2 = 0` point at scaled energy `e`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwStatus tw_rho2_zero(const struct TwModelParams *p, double e, double *n1, double *n3);

/**
 * Integrates from `(n1, n3, phi12, phi32)` to `t_final`, sampling every
 * `sample_dt`.
 *
 * # Safety
 * `p` and `initial` (4 values) must be readable, `out` valid for one write.
 */
enum TwStatus tw_trajectory_new(const struct TwModelParams *p,
                                const double *initial,
                                double t_final,
                                double sample_dt,
                                struct TwTrajectory **out);

/**
 * Releases a trajectory; null is ignored.
 *
 * # Safety
 * `t` must come from this library and not be used afterwards.
 */
void tw_trajectory_free(struct TwTrajectory *t);

/**
 * Number of samples; 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
size_t tw_trajectory_len(const struct TwTrajectory *t);

/**
 * Sample times and populations as rows `(t, n1, n2, n3)`; `len` must be
 * four times the sample count.
 *
 * # Safety
 * `t` must be a live handle and `out` valid for `len` writes.
 */
enum TwStatus tw_trajectory_populations(const struct TwTrajectory *t, double *out, size_t len);

/**
 * Largest relative energy and norm deviations along the trajectory.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwStatus tw_trajectory_drift(const struct TwTrajectory *t, double *energy, double *norm);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIWELL_H */
