/* Exercises the shared library through the C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "phi4/phi4.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);  \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  phi4_grid* grid = NULL;
  phi4_field* f = NULL;
  phi4_field* sq = NULL;
  phi4_path* path = NULL;
  phi4_ftle_result res;
  phi4_triple tri;
  int dim, cutoff, points;
  size_t modes, snaps;
  double l2, sup, c, spacing, horizon;
  double* coeffs;
  double* values;

  EXPECT(phi4_version()[0] != '\0');
  EXPECT(phi4_grid_create(3, 4, 0, &grid) == PHI4_INVALID_ARGUMENT);
  EXPECT(phi4_last_error()[0] != '\0');
  EXPECT(phi4_grid_create(2, 4, 0, &grid) == PHI4_OK);
  EXPECT(phi4_grid_info(grid, &dim, &cutoff, &points, &modes) == PHI4_OK);
  EXPECT(dim == 2 && cutoff == 4 && points == 18 && modes == 81);

  EXPECT(phi4_wick_constant(grid, 1.0, &c) == PHI4_OK);
  EXPECT(c > 0.5);

  /* Constant 2 everywhere, via its zero mode. */
  coeffs = calloc(2 * modes, sizeof(double));
  coeffs[2 * (modes / 2)] = 2.0;
  EXPECT(phi4_field_from_coeffs(grid, coeffs, 2 * modes, &f) == PHI4_OK);
  EXPECT(phi4_field_from_coeffs(grid, coeffs, 3, &sq) == PHI4_INVALID_ARGUMENT);
  EXPECT(phi4_field_product(f, f, &sq) == PHI4_OK);
  EXPECT(phi4_field_norms(sq, &l2, &sup) == PHI4_OK);
  EXPECT(fabs(l2 - 4.0) < 1e-14 && fabs(sup - 4.0) < 1e-14);
  values = malloc((size_t)(points * points) * sizeof(double));
  EXPECT(phi4_field_to_physical(sq, values, (size_t)(points * points)) == PHI4_OK);
  EXPECT(fabs(values[7] - 4.0) < 1e-14);

  /* FTLE on the constant potential q = 2: lambda = alpha - 6. */
  EXPECT(phi4_path_constant(f, 1.0, &path) == PHI4_OK);
  EXPECT(phi4_path_info(path, &snaps, &spacing, &horizon) == PHI4_OK);
  EXPECT(snaps == 1 && horizon == 1.0);
  EXPECT(phi4_ftle(path, 1.0, 0.0, 0, &res) == PHI4_OK);
  EXPECT(fabs(res.lambda_T + 5.0) < 1e-12 && res.converged);
  EXPECT(phi4_ftle(NULL, 1.0, 0.0, 0, &res) == PHI4_INVALID_ARGUMENT);

  EXPECT(phi4_steer_triple(4.0, 1.0, &tri) == PHI4_OK);
  EXPECT(tri.phi0 == 2.0 && tri.f == 6.0 && tri.c == 0.0);
  EXPECT(phi4_kappa_for_lambda(-5.0, 1.0) == 2.0);

  {
    phi4_path* missing = NULL;
    EXPECT(phi4_path_load("/nonexistent/path.csv", "q", &missing) == PHI4_IO);
    EXPECT(missing == NULL);
  }
  EXPECT(phi4_run_config("{") == 2);
  EXPECT(phi4_status_string(PHI4_BLOW_UP)[0] != '\0');

  free(values);
  free(coeffs);
  phi4_path_destroy(path);
  phi4_field_destroy(sq);
  phi4_field_destroy(f);
  phi4_grid_destroy(grid);
  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
