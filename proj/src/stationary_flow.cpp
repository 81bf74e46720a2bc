#include "phi4/stationary_flow.hpp"

#include <cmath>

#include "phi4/dpd_solver.hpp"
#include "phi4/error.hpp"

namespace phi4 {

namespace {

std::int64_t steps_for(double duration, double dt, const char* what) {
  if (!(duration >= 0.0)) fail(ErrorCode::invalid_argument, std::string(what) + " must be >= 0");
  const double ratio = duration / dt;
  const double r = std::round(ratio);
  if (std::abs(ratio - r) > 1e-9 * std::max(r, 1.0))
    fail(ErrorCode::invalid_argument, std::string(what) + " must be a multiple of dt");
  return static_cast<std::int64_t>(r);
}

SimulationState burn_in_state(const StochasticSimulator& sim, double burn_in) {
  const std::int64_t nb = steps_for(burn_in, sim.config().dt, "burn-in");
  SimulationState s = sim.initial_state(SpectralField(sim.grid()), InitialGaussian::stationary);
  s.step = static_cast<std::int64_t>(kStationaryOrigin) - nb;
  return sim.advance(std::move(s), nb);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double n = static_cast<double>(v.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

StationaryRun sample_stationary(const SolverConfig& cfg, double burn_in, std::uint32_t trajectory) {
  const StochasticSimulator sim(cfg, trajectory);
  StationaryRun run;
  run.burn_in = burn_in;
  run.seed = cfg.seed;
  run.trajectory = trajectory;
  run.c = sim.wick_shift();
  const double spacing = cfg.dt * cfg.snapshot_stride;
  run.phi.spacing = run.gaussian.spacing = run.q.spacing = spacing;

  SimulationState s = burn_in_state(sim, burn_in);
  const std::int64_t steps = cfg.num_steps();
  for (std::int64_t i = 0;; ++i) {
    if (i % cfg.snapshot_stride == 0) {
      SpectralField phi = s.phi();
      run.q.snapshots.push_back(renormalized_square(phi, s.gaussian, run.c));
      run.phi.snapshots.push_back(std::move(phi));
      run.gaussian.snapshots.push_back(s.gaussian);
    }
    if (i == steps) break;
    s = sim.advance(std::move(s), 1);
  }
  return run;
}

SpectralField renormalized_square(const SpectralField& phi, const SpectralField& z, double c) {
  check_same_grid(phi.grid(), z.grid());
  const SpectralField u = phi - z;
  SpectralField q = dealiased_product(u, u);
  q.axpy(2.0, dealiased_product(u, z));
  q += dealiased_product(z, z);
  q.coeffs()[q.grid().zero_index()] -= c;
  return q;
}

FieldPath renormalized_square(const FieldPath& phi, const FieldPath& z, double c) {
  if (phi.size() != z.size() || std::abs(phi.spacing - z.spacing) > 1e-12 * std::abs(phi.spacing) ||
      phi.t0 != z.t0)
    fail(ErrorCode::misaligned, "Phi and Z paths are not aligned");
  FieldPath q;
  q.spacing = phi.spacing;
  q.t0 = phi.t0;
  q.snapshots.reserve(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    q.snapshots.push_back(renormalized_square(phi.snapshots[i], z.snapshots[i], c));
  return q;
}

FieldPath deterministic_potential(double kappa, const SolverConfig& cfg) {
  FieldPath p = FieldPath::constant(SpectralField::constant(cfg.grid(), kappa));
  p.spacing = cfg.horizon;
  return p;
}

Observables spatial_observables(const SpectralField& phi) {
  const auto x = to_physical(phi);
  Observables o;
  for (double v : x) {
    const double v2 = v * v;
    o.mean_sq += v2;
    o.mean_quartic += v2 * v2;
  }
  o.mean_sq /= static_cast<double>(x.size());
  o.mean_quartic /= static_cast<double>(x.size());
  return o;
}

BurnInCalibration calibrate_burn_in(const SolverConfig& cfg, double initial, int trajectories,
                                    int max_doublings, double threshold) {
  if (trajectories < 2) fail(ErrorCode::invalid_argument, "burn-in calibration needs >= 2 trajectories");
  if (!(initial > 0.0)) fail(ErrorCode::invalid_argument, "initial burn-in must be > 0");
  if (!(threshold > 0.0)) fail(ErrorCode::invalid_argument, "acceptance threshold must be > 0");
  cfg.validate();

  auto observe = [&](double tb) {
    std::vector<Observables> out;
    out.reserve(trajectories);
    for (int t = 0; t < trajectories; ++t) {
      const StochasticSimulator sim(cfg, static_cast<std::uint32_t>(t));
      out.push_back(spatial_observables(burn_in_state(sim, tb).phi()));
    }
    return out;
  };

  BurnInCalibration cal;
  double tb = initial;
  auto lo = observe(tb);
  for (int level = 0; level <= max_doublings; ++level) {
    const auto hi = observe(2.0 * tb);
    std::vector<double> dsq(trajectories), dq(trajectories);
    for (int t = 0; t < trajectories; ++t) {
      dsq[t] = hi[t].mean_sq - lo[t].mean_sq;
      dq[t] = hi[t].mean_quartic - lo[t].mean_quartic;
    }
    BurnInStep step{tb, mean_of(dsq), standard_error(dsq), mean_of(dq), standard_error(dq), false};
    step.accepted = std::abs(step.delta_sq) <= threshold * step.se_sq &&
                    std::abs(step.delta_quartic) <= threshold * step.se_quartic;
    cal.history.push_back(step);
    if (step.accepted) {
      cal.burn_in = tb;
      cal.converged = true;
      return cal;
    }
    tb *= 2.0;
    lo = hi;
  }
  cal.burn_in = tb;
  return cal;
}

}  // namespace phi4
