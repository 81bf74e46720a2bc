#include "phi4/steer.hpp"

#include <algorithm>
#include <cmath>

#include "phi4/dpd_solver.hpp"
#include "phi4/error.hpp"
#include "phi4/stationary_flow.hpp"

namespace phi4 {

SteeringTriple triple_for_kappa(double kappa, double alpha) {
  if (!std::isfinite(kappa) || !std::isfinite(alpha))
    fail(ErrorCode::invalid_argument, "kappa and alpha must be finite");
  if (kappa < 0.0) return {0.0, 0.0, -kappa};
  const double r = std::sqrt(kappa);
  return {r, kappa * r - alpha * r, 0.0};
}

double kappa_for_lambda(double lambda, double alpha) noexcept { return (alpha - lambda) / 3.0; }

SteerResult steer_target(double lambda, double alpha, const SolverConfig& base, const FtleOptions& opts) {
  SolverConfig cfg = base;
  cfg.alpha = alpha;
  cfg.validate();
  const TorusGrid g = cfg.grid();

  SteerResult out;
  out.lambda_target = lambda;
  out.kappa = kappa_for_lambda(lambda, alpha);
  out.triple = triple_for_kappa(out.kappa, alpha);
  const auto& t = out.triple;

  const FieldPath forcing = FieldPath::constant(SpectralField::constant(g, t.f));
  const FieldPath j = solve_J(SpectralField::constant(g, t.phi0), forcing, t.c, cfg);

  FieldPath q;
  q.spacing = j.spacing;
  for (const auto& s : j.snapshots) {
    SpectralField qs = dealiased_product(s, s);
    qs.coeffs()[g.zero_index()] -= t.c;
    out.path_deviation = std::max(out.path_deviation, sup_norm(s - SpectralField::constant(g, t.phi0)));
    out.square_deviation = std::max(out.square_deviation, sup_norm(qs - SpectralField::constant(g, out.kappa)));
    q.snapshots.push_back(std::move(qs));
  }

  const PotentialPath analytic =
      PotentialPath::from_field_path(deterministic_potential(out.kappa, cfg), cfg.horizon);
  out.lambda_analytic = ftle(analytic, alpha, cfg.seed, opts).lambda_T;
  out.lambda_measured = ftle(PotentialPath::from_field_path(q, cfg.horizon), alpha, cfg.seed, opts).lambda_T;
  out.abs_err = std::abs(out.lambda_measured - lambda);
  return out;
}

std::vector<SteerResult> demo_support(const std::vector<double>& lambdas, double alpha, const SolverConfig& cfg,
                                      const FtleOptions& opts) {
  std::vector<SteerResult> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) out.push_back(steer_target(l, alpha, cfg, opts));
  return out;
}

}  // namespace phi4
