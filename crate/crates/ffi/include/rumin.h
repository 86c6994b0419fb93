#ifndef RUMIN_H
#define RUMIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RuminMethod {
  RUMIN_METHOD_HOMOTOPY = 0,
  RUMIN_METHOD_LAPLACIAN = 1,
} RuminMethod;

typedef enum RuminStatus {
  RUMIN_STATUS_OK = 0,
  RUMIN_STATUS_NULL_POINTER = 1,
  RUMIN_STATUS_INVALID_ARGUMENT = 2,
  RUMIN_STATUS_NOT_CLOSED = 3,
  RUMIN_STATUS_NO_CONVERGENCE = 4,
  RUMIN_STATUS_IO = 5,
  RUMIN_STATUS_INTERNAL = 6,
} RuminStatus;

// Rumin form with grid coefficients, component-major.
typedef struct RuminForm RuminForm;

// Uniform grid on a box centred at the origin.
typedef struct RuminGrid RuminGrid;

typedef struct RuminSolveReport {
  // `‖d_cφ − ω‖ / ‖ω‖` in `L⁴`.
  double residual_lq;
  // Same in `L²`, the natural exponent for degree 2.
  double residual_lq_half;
  double closedness;
  size_t iterations;
} RuminSolveReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the next failing call.
const char *rumin_last_error(void);

// Grid on `[-a_x, a_x]² × [-a_t, a_t]` with `points` samples per axis.
//
// # Safety
// `out` must be a valid pointer to writable storage for a handle.
enum RuminStatus rumin_grid_cube(double a_x, double a_t, size_t points, struct RuminGrid **out);

// Number of grid points.
//
// # Safety
// `grid` must be null or a handle from [`rumin_grid_cube`].
size_t rumin_grid_len(const struct RuminGrid *grid);

// # Safety
// `grid` must be null or a handle from [`rumin_grid_cube`] not yet freed.
void rumin_grid_free(struct RuminGrid *grid);

// Number of components of a Rumin form of degree `degree` on ℍ¹, or 0 above degree 3.
size_t rumin_form_components(size_t degree);

// Form of degree `degree` from `len = components · grid points` samples, component-major.
//
// # Safety
// `grid` must be a valid handle, `data` must point to `len` readable doubles and `out` must be writable.
enum RuminStatus rumin_form_new(const struct RuminGrid *grid,
                                size_t degree,
                                const double *data,
                                size_t len,
                                struct RuminForm **out);

// Seeded exact form `ω = d_cψ` of degree `degree` (1 to 3), `ψ` a smooth compactly supported form.
//
// # Safety
// `grid` must be a valid handle and `out` writable.
enum RuminStatus rumin_form_sample_exact(const struct RuminGrid *grid,
                                         uint64_t seed,
                                         size_t degree,
                                         struct RuminForm **out);

// # Safety
// `form` must be null or a live handle.
size_t rumin_form_degree(const struct RuminForm *form);

// Total number of samples, `components · grid points`.
//
// # Safety
// `form` must be null or a live handle.
size_t rumin_form_len(const struct RuminForm *form);

// Copies the samples into `buf`, which must hold at least [`rumin_form_len`] doubles.
//
// # Safety
// `form` must be a live handle and `buf` must point to `len` writable doubles.
enum RuminStatus rumin_form_copy(const struct RuminForm *form, double *buf, size_t len);

// `‖form‖_p` over the whole grid, `p ≥ 1`; `p = INFINITY` gives the maximum norm.
//
// # Safety
// `form` must be a live handle and `out` writable.
enum RuminStatus rumin_form_norm(const struct RuminForm *form, double p, double *out);

// Discrete `d_c` with one-sided closures at the boundary.
//
// # Safety
// `form` must be a live handle and `out` writable.
enum RuminStatus rumin_form_dc(const struct RuminForm *form, struct RuminForm **out);

// # Safety
// `form` must be null or a live handle.
void rumin_form_free(struct RuminForm *form);

// Solves `d_cφ = ω` for a closed `omega` with default tolerances. `report` may be null.
//
// # Safety
// `omega` must be a live handle, `phi` writable and `report` null or writable.
enum RuminStatus rumin_solve(const struct RuminForm *omega,
                             enum RuminMethod method,
                             struct RuminForm **phi,
                             struct RuminSolveReport *report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RUMIN_H */
