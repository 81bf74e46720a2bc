#ifndef PHI4_PHI4_H
#define PHI4_PHI4_H

/* C interface of the phi4 library. All functions return a phi4_status;
 * on failure phi4_last_error() describes the problem for the calling
 * thread. Objects are opaque handles released with the matching destroy
 * function (passing NULL is allowed). Coefficient arrays hold interleaved
 * (re, im) pairs for every |k|_inf <= N, k1 outer and k2 inner. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PHI4_API __declspec(dllexport)
#else
#define PHI4_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum phi4_status {
  PHI4_OK = 0,
  PHI4_INVALID_ARGUMENT = 1,
  PHI4_GRID_MISMATCH = 2,
  PHI4_BLOW_UP = 3,
  PHI4_NOT_CONVERGED = 4,
  PHI4_IO = 5,
  PHI4_PARSE = 6,
  PHI4_MISALIGNED = 7,
  PHI4_INTERNAL = 99
} phi4_status;

typedef struct phi4_grid phi4_grid;
typedef struct phi4_field phi4_field;
typedef struct phi4_path phi4_path;

typedef struct phi4_ftle_result {
  double lambda_T;
  double log_sigma;
  int iterations;
  double residual;
  int converged;
} phi4_ftle_result;

typedef struct phi4_triple {
  double phi0;
  double f;
  double c;
} phi4_triple;

PHI4_API const char* phi4_version(void);
PHI4_API const char* phi4_last_error(void);
PHI4_API const char* phi4_status_string(phi4_status status);

/* Grids. points == 0 selects the default padding. */
PHI4_API phi4_status phi4_grid_create(int dim, int cutoff, int points, phi4_grid** out);
PHI4_API void phi4_grid_destroy(phi4_grid* grid);
PHI4_API phi4_status phi4_grid_info(const phi4_grid* grid, int* dim, int* cutoff, int* points,
                                    size_t* num_modes);

/* Fields. */
PHI4_API phi4_status phi4_field_zero(const phi4_grid* grid, phi4_field** out);
PHI4_API phi4_status phi4_field_from_coeffs(const phi4_grid* grid, const double* re_im, size_t len,
                                            phi4_field** out);
PHI4_API phi4_status phi4_field_sample_gff(const phi4_grid* grid, uint64_t seed, phi4_field** out);
PHI4_API void phi4_field_destroy(phi4_field* field);
PHI4_API phi4_status phi4_field_coeffs(const phi4_field* field, double* re_im, size_t len);
/* values must hold M^dim doubles. */
PHI4_API phi4_status phi4_field_to_physical(const phi4_field* field, double* values, size_t len);
PHI4_API phi4_status phi4_field_product(const phi4_field* a, const phi4_field* b, phi4_field** out);
PHI4_API phi4_status phi4_field_norms(const phi4_field* field, double* l2, double* sup);
PHI4_API phi4_status phi4_field_besov_norm(const phi4_field* field, double beta, double* out);

PHI4_API phi4_status phi4_wick_constant(const phi4_grid* grid, double mass, double* out);

/* Potential paths read from a path file (field name, e.g. "q"). */
PHI4_API phi4_status phi4_path_load(const char* file, const char* field, phi4_path** out);
PHI4_API phi4_status phi4_path_constant(const phi4_field* q, double horizon, phi4_path** out);
PHI4_API void phi4_path_destroy(phi4_path* path);
PHI4_API phi4_status phi4_path_info(const phi4_path* path, size_t* snapshots, double* spacing, double* horizon);

/* FTLE of the linearization along q with parameter alpha; tol <= 0 and
 * max_iter <= 0 select the defaults. */
PHI4_API phi4_status phi4_ftle(const phi4_path* q, double alpha, double tol, int max_iter,
                               phi4_ftle_result* out);

PHI4_API phi4_status phi4_steer_triple(double kappa, double alpha, phi4_triple* out);
PHI4_API double phi4_kappa_for_lambda(double lambda, double alpha);

/* Runs an experiment described by a JSON document. Returns the process exit
 * status: 0 success, 2 invalid configuration, 1 runtime failure. Progress is
 * written to stdout, errors to stderr. */
PHI4_API int phi4_run_config(const char* json_text);

#ifdef __cplusplus
}
#endif

#endif
