#include "phi4/phi4.h"

#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "phi4/error.hpp"
#include "phi4/experiments.hpp"
#include "phi4/ftle.hpp"
#include "phi4/littlewood_paley.hpp"
#include "phi4/path_io.hpp"
#include "phi4/steer.hpp"
#include "phi4/wick.hpp"

struct phi4_grid {
  phi4::TorusGrid grid;
};
struct phi4_field {
  phi4::SpectralField field;
};
struct phi4_path {
  phi4::PotentialPath path;
};

namespace {

thread_local std::string last_error;

phi4_status set_error(phi4_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
phi4_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return PHI4_OK;
  } catch (const phi4::Error& e) {
    return set_error(static_cast<phi4_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PHI4_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PHI4_INTERNAL, e.what());
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) phi4::fail(phi4::ErrorCode::invalid_argument, std::string(name) + " is NULL");
}

}  // namespace

extern "C" {

const char* phi4_version(void) { return phi4::kVersion; }

const char* phi4_last_error(void) { return last_error.c_str(); }

const char* phi4_status_string(phi4_status s) {
  switch (s) {
    case PHI4_OK: return "ok";
    case PHI4_INVALID_ARGUMENT: return "invalid argument";
    case PHI4_GRID_MISMATCH: return "grid mismatch";
    case PHI4_BLOW_UP: return "blow-up";
    case PHI4_NOT_CONVERGED: return "not converged";
    case PHI4_IO: return "I/O error";
    case PHI4_PARSE: return "parse error";
    case PHI4_MISALIGNED: return "misaligned snapshots";
    case PHI4_INTERNAL: return "internal error";
  }
  return "unknown status";
}

phi4_status phi4_grid_create(int dim, int cutoff, int points, phi4_grid** out) {
  return guarded([&] {
    need(out, "out");
    *out = new phi4_grid{phi4::TorusGrid(dim, cutoff, points)};
  });
}

void phi4_grid_destroy(phi4_grid* grid) { delete grid; }

phi4_status phi4_grid_info(const phi4_grid* g, int* dim, int* cutoff, int* points, size_t* num_modes) {
  return guarded([&] {
    need(g, "grid");
    if (dim) *dim = g->grid.dim();
    if (cutoff) *cutoff = g->grid.cutoff();
    if (points) *points = g->grid.phys_points();
    if (num_modes) *num_modes = g->grid.num_modes();
  });
}

phi4_status phi4_field_zero(const phi4_grid* g, phi4_field** out) {
  return guarded([&] {
    need(g, "grid");
    need(out, "out");
    *out = new phi4_field{phi4::SpectralField(g->grid)};
  });
}

phi4_status phi4_field_from_coeffs(const phi4_grid* g, const double* re_im, size_t len, phi4_field** out) {
  return guarded([&] {
    need(g, "grid");
    need(re_im, "re_im");
    need(out, "out");
    const std::size_t n = g->grid.num_modes();
    if (len != 2 * n) phi4::fail(phi4::ErrorCode::invalid_argument, "coefficient array has the wrong length");
    std::vector<phi4::Complex> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = {re_im[2 * i], re_im[2 * i + 1]};
    *out = new phi4_field{phi4::SpectralField(g->grid, std::move(c))};
  });
}

phi4_status phi4_field_sample_gff(const phi4_grid* g, uint64_t seed, phi4_field** out) {
  return guarded([&] {
    need(g, "grid");
    need(out, "out");
    *out = new phi4_field{phi4::sample_gff(g->grid, seed)};
  });
}

void phi4_field_destroy(phi4_field* field) { delete field; }

phi4_status phi4_field_coeffs(const phi4_field* f, double* re_im, size_t len) {
  return guarded([&] {
    need(f, "field");
    need(re_im, "re_im");
    const auto c = f->field.coeffs();
    if (len != 2 * c.size()) phi4::fail(phi4::ErrorCode::invalid_argument, "coefficient array has the wrong length");
    for (std::size_t i = 0; i < c.size(); ++i) {
      re_im[2 * i] = c[i].real();
      re_im[2 * i + 1] = c[i].imag();
    }
  });
}

phi4_status phi4_field_to_physical(const phi4_field* f, double* values, size_t len) {
  return guarded([&] {
    need(f, "field");
    need(values, "values");
    if (len != f->field.grid().num_points())
      phi4::fail(phi4::ErrorCode::invalid_argument, "value array has the wrong length");
    phi4::to_physical(f->field, std::span<double>(values, len));
  });
}

phi4_status phi4_field_product(const phi4_field* a, const phi4_field* b, phi4_field** out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = new phi4_field{phi4::dealiased_product(a->field, b->field)};
  });
}

phi4_status phi4_field_norms(const phi4_field* f, double* l2, double* sup) {
  return guarded([&] {
    need(f, "field");
    if (l2) *l2 = phi4::l2_norm(f->field);
    if (sup) *sup = phi4::sup_norm(f->field);
  });
}

phi4_status phi4_field_besov_norm(const phi4_field* f, double beta, double* out) {
  return guarded([&] {
    need(f, "field");
    need(out, "out");
    *out = phi4::besov_norm(f->field, beta);
  });
}

phi4_status phi4_wick_constant(const phi4_grid* g, double mass, double* out) {
  return guarded([&] {
    need(g, "grid");
    need(out, "out");
    *out = phi4::wick_constant(g->grid, mass);
  });
}

phi4_status phi4_path_load(const char* file, const char* field, phi4_path** out) {
  return guarded([&] {
    need(file, "file");
    need(field, "field");
    need(out, "out");
    const phi4::PathFile pf = phi4::read_path_file(file);
    const phi4::FieldPath& q = pf.field(field);
    const double horizon =
        pf.header.horizon > 0.0 ? pf.header.horizon : pf.header.spacing * static_cast<double>(q.size() - 1);
    *out = new phi4_path{phi4::PotentialPath::from_field_path(q, horizon)};
  });
}

phi4_status phi4_path_constant(const phi4_field* q, double horizon, phi4_path** out) {
  return guarded([&] {
    need(q, "q");
    need(out, "out");
    phi4::PotentialPath p = phi4::PotentialPath::constant(q->field, horizon);
    p.validate();
    *out = new phi4_path{std::move(p)};
  });
}

void phi4_path_destroy(phi4_path* path) { delete path; }

phi4_status phi4_path_info(const phi4_path* p, size_t* snapshots, double* spacing, double* horizon) {
  return guarded([&] {
    need(p, "path");
    if (snapshots) *snapshots = p->path.snapshots.size();
    if (spacing) *spacing = p->path.spacing;
    if (horizon) *horizon = p->path.horizon;
  });
}

phi4_status phi4_ftle(const phi4_path* q, double alpha, double tol, int max_iter, phi4_ftle_result* out) {
  return guarded([&] {
    need(q, "path");
    need(out, "out");
    phi4::FtleOptions opts;
    if (tol > 0.0) opts.tol = tol;
    if (max_iter > 0) opts.max_iter = max_iter;
    const phi4::OperatorNorm n = phi4::operator_norm(q->path, alpha, opts);
    out->log_sigma = n.log_sigma;
    out->lambda_T = n.log_sigma / q->path.horizon;
    out->iterations = n.iterations;
    out->residual = n.residual;
    out->converged = n.converged ? 1 : 0;
  });
}

phi4_status phi4_steer_triple(double kappa, double alpha, phi4_triple* out) {
  return guarded([&] {
    need(out, "out");
    const auto t = phi4::triple_for_kappa(kappa, alpha);
    *out = {t.phi0, t.f, t.c};
  });
}

double phi4_kappa_for_lambda(double lambda, double alpha) { return phi4::kappa_for_lambda(lambda, alpha); }

int phi4_run_config(const char* json_text) {
  if (json_text == nullptr) {
    set_error(PHI4_INVALID_ARGUMENT, "config text is NULL");
    return 2;
  }
  return phi4::run_config_text(json_text, std::cout, std::cerr);
}

}  // extern "C"
