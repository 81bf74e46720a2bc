#pragma once

// Constant steering: a triple (phi0, f, c) that holds the controlled
// deterministic equation at a constant phi0 with phi0^2 - c = kappa, and the
// choice kappa = (alpha - lambda) / 3 that makes the linearization along it
// grow at rate lambda.

#include <vector>

#include "phi4/config.hpp"
#include "phi4/ftle.hpp"

namespace phi4 {

struct SteeringTriple {
  double phi0 = 0.0;
  double f = 0.0;
  double c = 0.0;
};

/// kappa < 0: (0, 0, -kappa); kappa >= 0: (sqrt(kappa), kappa^1.5 - alpha sqrt(kappa), 0).
SteeringTriple triple_for_kappa(double kappa, double alpha);

/// (alpha - lambda) / 3
double kappa_for_lambda(double lambda, double alpha) noexcept;

struct SteerResult {
  double lambda_target = 0.0;
  double kappa = 0.0;
  SteeringTriple triple;
  double lambda_analytic = 0.0;   // ftle on q = kappa
  double lambda_measured = 0.0;   // ftle on the simulated q = J^2 - c
  double path_deviation = 0.0;    // sup_t ||J(t) - phi0||_inf
  double square_deviation = 0.0;  // sup_t ||J(t)^2 - c - kappa||_inf
  double abs_err = 0.0;           // |lambda_measured - lambda_target|
};

/// Runs the steering pipeline for one target: triple, solve_J over
/// [0, cfg.horizon], both FTLE evaluations.
SteerResult steer_target(double lambda, double alpha, const SolverConfig& cfg, const FtleOptions& opts = {});

std::vector<SteerResult> demo_support(const std::vector<double>& lambdas, double alpha, const SolverConfig& cfg,
                                      const FtleOptions& opts = {});

}  // namespace phi4
