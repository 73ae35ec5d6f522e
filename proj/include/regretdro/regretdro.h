/*
 * C interface to the regretdro library.
 *
 * Objects are opaque handles created by rdro_*_create and released by the
 * matching rdro_*_destroy. Every fallible call returns an rdro_status; on
 * failure a description is available from rdro_last_error_message(), which
 * is thread-local and valid until the next failing call on the same thread.
 * Vectors are passed as contiguous doubles; matrices are row-major.
 */
#ifndef REGRETDRO_H
#define REGRETDRO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(REGRETDRO_BUILDING_LIBRARY)
#    define RDRO_API __declspec(dllexport)
#  else
#    define RDRO_API __declspec(dllimport)
#  endif
#else
#  define RDRO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdro_status {
  RDRO_OK = 0,
  RDRO_ERR_INVALID_ARGUMENT = 1,
  RDRO_ERR_DIMENSION_MISMATCH = 2,
  RDRO_ERR_UNSUPPORTED_COMBINATION = 3,
  RDRO_ERR_NOT_IN_FEASIBLE_SET = 4,
  RDRO_ERR_INVALID_ALPHA = 5,
  RDRO_ERR_NUMERICAL_BREAKDOWN = 6,
  RDRO_ERR_DIMENSION_TOO_LARGE = 7,
  RDRO_ERR_INFEASIBLE_GRID = 8,
  RDRO_ERR_BUFFER_TOO_SMALL = 9,
  RDRO_ERR_INTERNAL = 100
} rdro_status;

typedef enum rdro_norm { RDRO_NORM_L1 = 0, RDRO_NORM_L2 = 1, RDRO_NORM_LINF = 2 } rdro_norm;

typedef enum rdro_objective {
  RDRO_OBJECTIVE_DRRO = 0, /* worst-case expected regret */
  RDRO_OBJECTIVE_DRO = 1,  /* worst-case expected cost */
  RDRO_OBJECTIVE_WCVAR = 2 /* worst-case CVaR of regret */
} rdro_objective;

typedef enum rdro_method {
  RDRO_METHOD_AUTO = 0,
  RDRO_METHOD_SIMPLEX = 1,
  RDRO_METHOD_SUBGRADIENT = 2
} rdro_method;

typedef enum rdro_solve_status {
  RDRO_SOLVE_OPTIMAL = 0,
  RDRO_SOLVE_ITERATION_LIMIT = 1,
  RDRO_SOLVE_INFEASIBLE = 2,
  RDRO_SOLVE_UNBOUNDED = 3
} rdro_solve_status;

typedef struct rdro_set rdro_set;
typedef struct rdro_dist rdro_dist;
typedef struct rdro_report rdro_report;

RDRO_API const char* rdro_version(void);
RDRO_API const char* rdro_last_error_message(void);
RDRO_API const char* rdro_status_name(rdro_status status);
RDRO_API const char* rdro_solve_status_name(rdro_solve_status status);

/* ---- feasible sets ---------------------------------------------------- */

RDRO_API rdro_status rdro_set_create_vpolytope(size_t dim, size_t count, const double* vertices,
                                               rdro_set** out);
RDRO_API rdro_status rdro_set_create_box(size_t dim, const double* lower, const double* upper,
                                         rdro_set** out);
RDRO_API rdro_status rdro_set_create_norm_ball(size_t dim, const double* center, double radius,
                                               rdro_norm ball_norm, rdro_set** out);
RDRO_API void rdro_set_destroy(rdro_set* set);
RDRO_API size_t rdro_set_dimension(const rdro_set* set);

RDRO_API rdro_status rdro_support_function(const rdro_set* set, const double* y, double* out);
RDRO_API rdro_status rdro_min_cost(const rdro_set* set, const double* w, double* out);
/* witness may be NULL. */
RDRO_API rdro_status rdro_farthest_distance(const rdro_set* set, const double* x, rdro_norm dual_norm,
                                            double* distance, double* witness);
RDRO_API rdro_status rdro_contains(const rdro_set* set, const double* x, double tol, int* out);
/* Writes a feasible point drawn from a generator seeded with seed. */
RDRO_API rdro_status rdro_sample_point(const rdro_set* set, uint64_t seed, double* out);

/* ---- nominal distributions -------------------------------------------- */

/* weights may be NULL for uniform weights. */
RDRO_API rdro_status rdro_dist_create(size_t dim, size_t count, const double* atoms,
                                      const double* weights, rdro_dist** out);
RDRO_API void rdro_dist_destroy(rdro_dist* dist);
RDRO_API size_t rdro_dist_dimension(const rdro_dist* dist);

RDRO_API rdro_status rdro_w1_distance(const rdro_dist* p, const rdro_dist* q, rdro_norm ground_norm,
                                      double* out);

/* ---- evaluation --------------------------------------------------------- */

RDRO_API rdro_status rdro_regret(const rdro_set* set, const double* x, const double* w, double* out);
RDRO_API rdro_status rdro_worst_case_expected_regret(const rdro_set* set, const double* x,
                                                     const rdro_dist* nominal, double radius,
                                                     rdro_norm ground_norm, double* out);
RDRO_API rdro_status rdro_worst_case_cvar_regret(const rdro_set* set, const double* x,
                                                 const rdro_dist* nominal, double radius,
                                                 rdro_norm ground_norm, double alpha, double* out);

/* ---- solving ------------------------------------------------------------ */

typedef struct rdro_solver_options {
  rdro_method method;
  size_t max_iter;
  double step;
  uint64_t seed;
} rdro_solver_options;

RDRO_API void rdro_solver_options_default(rdro_solver_options* options);

/* alpha is read only for RDRO_OBJECTIVE_WCVAR. options may be NULL. */
RDRO_API rdro_status rdro_solve(const rdro_set* set, const rdro_dist* nominal, rdro_objective objective,
                                double radius, double alpha, rdro_norm ground_norm,
                                const rdro_solver_options* options, rdro_report** out);
RDRO_API void rdro_report_destroy(rdro_report* report);
RDRO_API size_t rdro_report_dimension(const rdro_report* report);
RDRO_API void rdro_report_x(const rdro_report* report, double* out);
RDRO_API double rdro_report_objective(const rdro_report* report);
RDRO_API double rdro_report_lambda(const rdro_report* report);
RDRO_API const char* rdro_report_method(const rdro_report* report);
RDRO_API size_t rdro_report_iterations(const rdro_report* report);
RDRO_API double rdro_report_residual(const rdro_report* report);
RDRO_API rdro_solve_status rdro_report_status(const rdro_report* report);
RDRO_API int rdro_report_non_unique(const rdro_report* report);

/* Minimizer of the farthest-point distance in the dual of ground_norm, the
 * point DRRO solutions approach as the radius grows. value may be NULL. */
RDRO_API rdro_status rdro_regularizer_argmin(const rdro_set* set, rdro_norm ground_norm,
                                             const rdro_solver_options* options, double* x,
                                             double* value);

/* ---- verification ------------------------------------------------------- */

typedef struct rdro_certificate {
  double analytic;
  double primal_lower;
  double gap;
  double lambda_star;
  size_t rounds;
  int tolerance_reached;
} rdro_certificate;

/* Worst-case expected regret (alpha < 0) or worst-case CVaR of regret
 * (0 <= alpha < 1) at x, checked against the primal transport bound. */
RDRO_API rdro_status rdro_certify(const rdro_set* set, const double* x, const rdro_dist* nominal,
                                  double radius, rdro_norm ground_norm, double alpha, double tol,
                                  size_t max_refinements, rdro_certificate* out);

/* |optimal value of the vertex program - optimal value of the support-function
 * program| for a V-polytope with the linf dual norm (ground norm l1). */
RDRO_API rdro_status rdro_builder_equivalence(const rdro_set* set, const rdro_dist* nominal,
                                              double radius, double* delta);

/* Plain-text LP compiled for the given problem. Writes at most capacity bytes
 * including the terminator; *needed receives the full size. */
RDRO_API rdro_status rdro_export_lp(const rdro_set* set, const rdro_dist* nominal,
                                    rdro_objective objective, double radius, double alpha,
                                    rdro_norm ground_norm, char* buffer, size_t capacity,
                                    size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* REGRETDRO_H */
