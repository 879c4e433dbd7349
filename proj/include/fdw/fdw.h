#ifndef FDW_FDW_H
#define FDW_FDW_H

/* C interface of the fractional damped wave library. Every function returns
 * an fdw_status; on failure fdw_last_error() holds a one-line message for the
 * calling thread. Handles are opaque and released with their _destroy call.
 * Strings returned through handles stay valid until the handle is destroyed. */

#include <stddef.h>

#if defined(FDW_BUILDING_LIBRARY)
#define FDW_API __attribute__((visibility("default")))
#else
#define FDW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fdw_status {
  FDW_OK = 0,
  FDW_ERR_DOMAIN = 1,      /* argument outside the admissible range */
  FDW_ERR_INDEX = 2,       /* index past the available data */
  FDW_ERR_SOLVER = 3,      /* factorization failure or blow-up */
  FDW_ERR_CONVERGENCE = 4, /* iteration or series did not converge */
  FDW_ERR_IO = 5,
  FDW_ERR_CONFIG = 6, /* unknown case name or bad option */
  FDW_ERR_NULL = 7,   /* required pointer argument was NULL */
  FDW_ERR_INTERNAL = 8
} fdw_status;

FDW_API const char* fdw_version(void);
FDW_API const char* fdw_status_name(fdw_status status);
/* Message of the last failed call on this thread, "" if none. */
FDW_API const char* fdw_last_error(void);

/* ---- fractional calculus ---- */

FDW_API fdw_status fdw_a_gamma(double gamma, double alpha0, double* out);
/* Caputo derivative (order > 0) or Riemann-Liouville integral (order < 0) of t^mu at t. */
FDW_API fdw_status fdw_caputo_monomial(double order, double mu, double t, double* out);
FDW_API fdw_status fdw_positivity_constants(double gamma, double final_time, double* c1,
                                            double* c2);

/* gamma_i = i/(grid+1). Writes gamma, c1, c2 rows; *all_strict = 1 when c2 > c1 everywhere. */
FDW_API fdw_status fdw_constants_csv(int grid, double final_time, const char* path,
                                     int* all_strict);

/* ---- convolution quadrature ---- */

typedef struct fdw_cq_scheme fdw_cq_scheme;

/* Fills out[0..steps] with the BDF2 weights of order gamma. */
FDW_API fdw_status fdw_bdf2_weights(double gamma, double kappa, size_t steps, double* out);

/* gamma in (-1,0) u (0,1). */
FDW_API fdw_status fdw_cq_scheme_create(double gamma, double kappa, size_t steps,
                                        fdw_cq_scheme** out);
FDW_API void fdw_cq_scheme_destroy(fdw_cq_scheme* scheme);
/* Weight omega_n and correction weights w0_n, w1_n; any output may be NULL. */
FDW_API fdw_status fdw_cq_scheme_weights(const fdw_cq_scheme* scheme, size_t n, double* omega,
                                         double* w0, double* w1);
FDW_API fdw_status fdw_cq_scheme_write_csv(const fdw_cq_scheme* scheme, const char* path);

/* ---- scalar reference solver ---- */

typedef double (*fdw_time_fn)(double t, void* user);

typedef struct fdw_ode_problem {
  double gamma;
  double lambda;
  double a_gamma;
  double u0;
  double v0;
  double final_time;
  size_t substeps;
  /* Source f(t); when NULL, f(t) = f_const + f_slope * t. */
  fdw_time_fn f;
  void* user;
  double f_const;
  double f_slope;
} fdw_ode_problem;

typedef struct fdw_asymptotic_fit {
  double exponent;
  double coefficient;
  double expected_exponent;
  double expected_coefficient;
  int monotone;
  size_t samples;
} fdw_asymptotic_fit;

typedef struct fdw_ode_solution fdw_ode_solution;

FDW_API void fdw_ode_problem_init(fdw_ode_problem* problem);
FDW_API fdw_status fdw_ode_solve(const fdw_ode_problem* problem, fdw_ode_solution** out);
FDW_API void fdw_ode_solution_destroy(fdw_ode_solution* solution);
FDW_API size_t fdw_ode_solution_size(const fdw_ode_solution* solution);
/* Sample i: time, u, and v = u''. Any output may be NULL. */
FDW_API fdw_status fdw_ode_solution_sample(const fdw_ode_solution* solution, size_t i, double* t,
                                           double* u, double* v);
FDW_API fdw_status fdw_ode_solution_fit(const fdw_ode_solution* solution,
                                        fdw_asymptotic_fit* out);
FDW_API fdw_status fdw_ode_solution_write_csv(const fdw_ode_solution* solution, const char* path);

/* ---- convergence studies ---- */

typedef struct fdw_convergence_options {
  const char* case_name; /* smooth1d, smooth2d, nonsmooth1d, nonsmooth1d_printed */
  double gamma;
  double alpha0;
  int corrected;
  int levels;
  double coupling; /* h = coupling * kappa; <= 0 picks the case default */
  double kappa0;   /* first step; <= 0 picks the case default */
  double final_time;
  int parallel;
} fdw_convergence_options;

typedef struct fdw_level {
  int level;
  int n_per_side;
  double h;
  double kappa;
  double error_energy;
  double error_l2max;
} fdw_level;

typedef struct fdw_rate {
  double global;
  double last_pair;
  int pre_asymptotic;
} fdw_rate;

typedef struct fdw_convergence_report fdw_convergence_report;

FDW_API void fdw_convergence_options_init(fdw_convergence_options* options);
FDW_API fdw_status fdw_convergence_run(const fdw_convergence_options* options,
                                       fdw_convergence_report** out);
FDW_API void fdw_convergence_destroy(fdw_convergence_report* report);
FDW_API size_t fdw_convergence_level_count(const fdw_convergence_report* report);
FDW_API fdw_status fdw_convergence_level(const fdw_convergence_report* report, size_t i,
                                         fdw_level* out);
/* Rates in the case's primary norm (energy in 1D, max-L2 in 2D) and in both norms. */
FDW_API fdw_status fdw_convergence_rates(const fdw_convergence_report* report, fdw_rate* primary,
                                         fdw_rate* energy, fdw_rate* l2max);
FDW_API const char* fdw_convergence_primary_norm(const fdw_convergence_report* report);
FDW_API const char* fdw_convergence_summary(const fdw_convergence_report* report);
FDW_API fdw_status fdw_convergence_write_csv(const fdw_convergence_report* report,
                                             const char* path);
FDW_API fdw_status fdw_expected_rate(const char* case_name, double gamma, int corrected,
                                     double* out);

/* ---- damping demo ---- */

typedef struct fdw_damping_options {
  const double* gammas; /* NULL keeps the default sweep */
  size_t gamma_count;
  double alpha0;
  int n_per_side;
  double kappa_over_h;
  double final_time;
  int corrected;
  int parallel;
} fdw_damping_options;

typedef struct fdw_damping_trace {
  const char* label;
  double gamma; /* NaN for the undamped baseline */
  double a_gamma;
  double late_amplitude;
  double final_energy;
} fdw_damping_trace;

typedef struct fdw_damping_report fdw_damping_report;

FDW_API void fdw_damping_options_init(fdw_damping_options* options);
FDW_API fdw_status fdw_damping_run(const fdw_damping_options* options, fdw_damping_report** out);
FDW_API void fdw_damping_destroy(fdw_damping_report* report);
FDW_API size_t fdw_damping_trace_count(const fdw_damping_report* report);
FDW_API fdw_status fdw_damping_trace_info(const fdw_damping_report* report, size_t i,
                                          fdw_damping_trace* out);
FDW_API fdw_status fdw_damping_write_csv(const fdw_damping_report* report, const char* path);

/* ---- single run ---- */

typedef struct fdw_solve_options {
  const char* case_name;
  double gamma;
  double alpha0;
  int corrected;
  int n_per_side;
  double kappa;
  double final_time;
  int snapshot_every;
  int allow_cfl_violation;
} fdw_solve_options;

typedef struct fdw_solve_summary {
  size_t steps;
  double a_gamma;
  double h;
  double c_inv;
  double cfl_limit;
  double error_energy;
  double error_l2max;
  double first_energy;
  double final_energy;
} fdw_solve_summary;

typedef struct fdw_solve_report fdw_solve_report;

FDW_API void fdw_solve_options_init(fdw_solve_options* options);
FDW_API fdw_status fdw_solve_run(const fdw_solve_options* options, fdw_solve_report** out);
FDW_API void fdw_solve_destroy(fdw_solve_report* report);
FDW_API fdw_status fdw_solve_get_summary(const fdw_solve_report* report, fdw_solve_summary* out);
FDW_API fdw_status fdw_solve_write_snapshots_csv(const fdw_solve_report* report, const char* path);
FDW_API fdw_status fdw_solve_write_energy_csv(const fdw_solve_report* report, const char* path);

/* ---- acceptance checks ---- */

typedef struct fdw_criterion {
  int id;
  const char* name;
  int passed;
  const char* detail;
  double seconds;
} fdw_criterion;

typedef struct fdw_acceptance fdw_acceptance;

FDW_API int fdw_acceptance_criterion_count(void);
/* ids == NULL or count == 0 runs every criterion. */
FDW_API fdw_status fdw_acceptance_run(const int* ids, size_t count, fdw_acceptance** out);
FDW_API void fdw_acceptance_destroy(fdw_acceptance* results);
FDW_API size_t fdw_acceptance_size(const fdw_acceptance* results);
FDW_API fdw_status fdw_acceptance_get(const fdw_acceptance* results, size_t i, fdw_criterion* out);
/* "criterion <id> <PASS|FAIL> <name> (<s>s): <detail>" */
FDW_API const char* fdw_acceptance_line(const fdw_acceptance* results, size_t i);

#ifdef __cplusplus
}
#endif

#endif
