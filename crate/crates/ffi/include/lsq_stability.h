#ifndef LSQ_STABILITY_H
#define LSQ_STABILITY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LsqStatus {
  LSQ_STATUS_OK = 0,
  LSQ_STATUS_NULL_POINTER = 1,
  LSQ_STATUS_DOMAIN = 2,
  LSQ_STATUS_CONTRACT = 3,
  LSQ_STATUS_RANK_DEFICIENT = 4,
  LSQ_STATUS_BUFFER_TOO_SMALL = 5,
  LSQ_STATUS_CONFIG = 6,
  LSQ_STATUS_IO = 7,
  LSQ_STATUS_INTERNAL = 8,
  LSQ_STATUS_PANIC = 9,
} LsqStatus;

typedef enum LsqWitnessCase {
  /**
   * Large-λ regime: an explicit polynomial certifies growth.
   */
  LSQ_WITNESS_CASE_I = 1,
  /**
   * Small-λ regime: the bound is 1.
   */
  LSQ_WITNESS_CASE_II = 2,
} LsqWitnessCase;

/**
 * Opaque handle to an orthonormal Jacobi basis.
 */
typedef struct LsqBasis LsqBasis;

typedef struct LsqWitness {
  enum LsqWitnessCase case_;
  /**
   * Number of order statistics used in the product (0 in case II).
   */
  size_t k;
  double lambda;
  double bound;
  bool event_holds;
} LsqWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *lsq_last_error_message(void);

/**
 * Creates the degree-`degree` orthonormal basis for exponents `(alpha, beta)`.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum LsqStatus lsq_basis_new(double alpha, double beta, size_t degree, struct LsqBasis **out);

/**
 * Releases a handle from [`lsq_basis_new`]. Null is ignored.
 *
 * # Safety
 * `basis` must be null or a live handle; it must not be used afterwards.
 */
void lsq_basis_free(struct LsqBasis *basis);

/**
 * Writes `L_0(x), ..., L_m(x)` into `out` (length at least `m + 1`).
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum LsqStatus lsq_basis_eval(const struct LsqBasis *basis, double x, double *out, size_t len);

/**
 * `K = sup_x Σ_j L_j(x)²`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LsqStatus lsq_basis_christoffel_k(const struct LsqBasis *basis, double *out);

/**
 * Condition number of least squares on the given points. `clamped` (may be
 * null) reports whether the smallest Gram eigenvalue hit the 1e-13 floor.
 *
 * # Safety
 * `points` must hold `n` doubles; `kappa` must be writable.
 */
enum LsqStatus lsq_condition_number(const struct LsqBasis *basis,
                                    const double *points,
                                    size_t n,
                                    double *kappa,
                                    bool *clamped);

/**
 * Least-squares coefficients in the orthonormal basis for `values` at `points`.
 *
 * # Safety
 * `points` and `values` must hold `n` doubles; `coeffs` must hold `len` doubles.
 */
enum LsqStatus lsq_least_squares_fit(const struct LsqBasis *basis,
                                     const double *points,
                                     const double *values,
                                     size_t n,
                                     double *coeffs,
                                     size_t len);

/**
 * Fills `out[0..n]` with i.i.d. draws from the Jacobi probability measure.
 *
 * # Safety
 * `out` must hold `n` writable doubles.
 */
enum LsqStatus lsq_sample_iid(double alpha, double beta, uint64_t seed, double *out, size_t n);

/**
 * `sup_{deg p <= m} ||p||_∞ / max_i |p(x_i)|` by linear programming.
 *
 * # Safety
 * `points` must hold `n` doubles; `out` must be writable.
 */
enum LsqStatus lsq_b_exact(const double *points, size_t n, size_t m, size_t grid, double *out);

/**
 * Witness lower bound for degree `m` on the given points (sorted internally).
 *
 * # Safety
 * `points` must hold `n` doubles; `out` must be writable.
 */
enum LsqStatus lsq_witness_lower_bound(double alpha,
                                       double beta,
                                       const double *points,
                                       size_t n,
                                       size_t m,
                                       double big_c,
                                       struct LsqWitness *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSQ_STABILITY_H */
