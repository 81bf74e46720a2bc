#include "phi4/dpd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "phi4/error.hpp"
#include "phi4/littlewood_paley.hpp"

namespace phi4 {

ExponentialEuler::ExponentialEuler(const TorusGrid& grid, double mass, double dt) {
  const auto& nsq = grid.norm_sq_table();
  decay_.resize(nsq.size());
  weight_.resize(nsq.size());
  for (std::size_t i = 0; i < nsq.size(); ++i) {
    const double mu = mode_rate(nsq[i], mass);
    decay_[i] = std::exp(-mu * dt);
    weight_[i] = mu == 0.0 ? dt : -std::expm1(-mu * dt) / mu;
  }
}

void ExponentialEuler::apply(SpectralField& u, const SpectralField& g) const {
  check_same_grid(u.grid(), g.grid());
  auto uc = u.coeffs();
  const auto gc = g.coeffs();
  for (std::size_t i = 0; i < uc.size(); ++i) uc[i] = decay_[i] * uc[i] + weight_[i] * gc[i];
}

namespace {

void require_cubic_grid(const TorusGrid& g) {
  if (!g.cubic_exact())
    fail(ErrorCode::invalid_argument, "cubic drift needs M >= 4N+1 to be alias-free");
}

// G = -R^3 - 3 R^2 Z1 - 3 R Z2 - Z3 + linear R + compensation Z1, evaluated
// pointwise on the padded grid and truncated.
SpectralField remainder_drift(const SpectralField& r, const WickFields& z, double linear,
                              double compensation) {
  const TorusGrid& g = r.grid();
  check_same_grid(g, z.z1.grid());
  check_same_grid(g, z.z2.grid());
  check_same_grid(g, z.z3.grid());
  require_cubic_grid(g);
  auto x = to_physical(r);
  const auto z1 = to_physical(z.z1);
  const auto z2 = to_physical(z.z2);
  const auto z3 = to_physical(z.z3);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double rv = x[i];
    x[i] = -rv * rv * rv - 3.0 * rv * rv * z1[i] - 3.0 * rv * z2[i] - z3[i] + linear * rv +
           compensation * z1[i];
  }
  return to_spectral(g, x);
}

void check_finite(const SpectralField& f, std::int64_t step, const char* what) {
  if (!f.all_finite()) throw BlowUpError(step, what);
}

}  // namespace

SpectralField remainder_step(const SpectralField& r, const WickFields& z, const SolverConfig& cfg,
                             MassCompensation comp, std::int64_t step) {
  const double lin = cfg.alpha + cfg.mass;
  const double c = comp == MassCompensation::on ? lin : 0.0;
  SpectralField out = r;
  ExponentialEuler(r.grid(), cfg.mass, cfg.dt).apply(out, remainder_drift(r, z, lin, c));
  check_finite(out, step, "remainder blew up");
  return out;
}

PsiSolution solve_psi(const SpectralField& phi0, const WickTriple& triple, const SolverConfig& cfg) {
  cfg.validate();
  const std::int64_t steps = cfg.num_steps();
  if (std::abs(triple.dt - cfg.dt) > 1e-12 * cfg.dt)
    fail(ErrorCode::misaligned, "Wick triple spacing differs from the solver time step");
  if (static_cast<std::int64_t>(triple.size()) < steps)
    fail(ErrorCode::misaligned, "Wick triple does not cover the horizon");
  check_same_grid(phi0.grid(), triple.snapshots.front().z1.grid());

  const double lin = cfg.alpha + cfg.mass;
  const ExponentialEuler scheme(phi0.grid(), cfg.mass, cfg.dt);
  PsiSolution out;
  out.remainder.spacing = out.psi.spacing = cfg.dt * cfg.snapshot_stride;
  SpectralField r = phi0;
  auto record = [&](std::int64_t i) {
    const auto& z1 = triple.snapshots[std::min<std::size_t>(i, triple.size() - 1)].z1;
    out.remainder.snapshots.push_back(r);
    out.psi.snapshots.push_back(r + z1);
  };
  for (std::int64_t i = 0; i < steps; ++i) {
    if (i % cfg.snapshot_stride == 0) record(i);
    const SpectralField g = remainder_drift(r, triple.snapshots[i], lin, 0.0);
    scheme.apply(r, g);
    check_finite(r, i, "remainder blew up");
  }
  if (steps % cfg.snapshot_stride == 0) record(steps);
  return out;
}

FieldPath solve_J(const SpectralField& phi0, const FieldPath& forcing, double c, const SolverConfig& cfg) {
  cfg.validate();
  if (!(c >= 0.0)) fail(ErrorCode::invalid_argument, "renormalization shift c must be >= 0");
  if (forcing.empty()) fail(ErrorCode::invalid_argument, "forcing path is empty");
  const TorusGrid& g = phi0.grid();
  check_same_grid(g, forcing.snapshots.front().grid());
  require_cubic_grid(g);
  const std::int64_t steps = cfg.num_steps();
  const ExponentialEuler scheme(g, 0.0, cfg.dt);
  const double lin = 3.0 * c + cfg.alpha;

  FieldPath out;
  out.spacing = cfg.dt * cfg.snapshot_stride;
  SpectralField phi = phi0;
  for (std::int64_t i = 0; i < steps; ++i) {
    if (i % cfg.snapshot_stride == 0) out.snapshots.push_back(phi);
    auto x = to_physical(phi);
    const auto f = to_physical(forcing.at_time(static_cast<double>(i) * cfg.dt));
    for (std::size_t p = 0; p < x.size(); ++p) {
      const double v = x[p];
      x[p] = -v * v * v + lin * v + f[p];
    }
    scheme.apply(phi, to_spectral(g, x));
    check_finite(phi, i, "controlled solution blew up");
  }
  if (steps % cfg.snapshot_stride == 0) out.snapshots.push_back(phi);
  return out;
}

int u_split_level(double r_sup, double epsilon) noexcept {
  const double scale = std::max(r_sup, 1.0);
  const int n = static_cast<int>(std::lround(std::log2(scale) / (2.0 - 2.0 * epsilon)));
  return std::max(n, 1);
}

USplit u_split(const SpectralField& r, const WickFields& z, int n, const std::optional<SpectralField>& r2) {
  const TorusGrid& g = r.grid();
  check_same_grid(g, z.z1.grid());
  check_same_grid(g, z.z2.grid());
  check_same_grid(g, z.z3.grid());
  if (n < 0) fail(ErrorCode::invalid_argument, "split level must be >= 0");
  require_cubic_grid(g);

  const SpectralField r_sq = dealiased_product(r, r);
  const int top = max_block(g);
  const int n1 = std::min(2 * n, top);
  const int n2 = std::min(n, top);

  // u >= v := v < u + u (.) v
  auto para_or_res_right = [](const SpectralField& u, const SpectralField& v) {
    return paraproduct_less(v, u) + resonant(u, v);
  };

  SpectralField u1 = -3.0 * paraproduct_less(r_sq, project_high(z.z1, n1));
  u1.axpy(-3.0, paraproduct_less(r, project_high(z.z2, n2)));
  u1 -= z.z3;

  SpectralField u2 = -3.0 * paraproduct_less(r_sq, project_low(z.z1, n1));
  u2.axpy(-3.0, paraproduct_less(r, project_low(z.z2, n2)));
  u2.axpy(-3.0, para_or_res_right(r_sq, z.z1));
  u2.axpy(-3.0, para_or_res_right(r, z.z2));

  SpectralField cubic = -1.0 * dealiased_product(r, r, r);
  if (r2) cubic += dealiased_product(*r2, *r2, *r2);
  return {std::move(u1), std::move(u2), std::move(cubic)};
}

RemainderDiagnostics diagnose(const SpectralField& r, const WickFields& z, const SolverConfig& cfg,
                              bool with_split) {
  RemainderDiagnostics d;
  d.r_holder = besov_norm(r, 2.0 - cfg.epsilon);
  d.r_sup = sup_norm(r);
  d.u1_norm = d.u2_norm = std::numeric_limits<double>::quiet_NaN();
  if (with_split) {
    const auto s = u_split(r, z, u_split_level(d.r_sup, cfg.epsilon));
    d.u1_norm = besov_norm(s.u1, -cfg.epsilon - cfg.diag_delta);
    d.u2_norm = besov_norm(s.u2, -cfg.epsilon);
  }
  return d;
}

// ---------------------------------------------------------------------------

StochasticSimulator::StochasticSimulator(SolverConfig cfg, std::uint32_t trajectory)
    : cfg_((cfg.validate(), cfg)),
      grid_(cfg_.grid()),
      noise_(cfg_.seed, trajectory, cfg_.effective_noise_dt(), cfg_.noise_amplitude),
      shift_(cfg_.wick_shift()),
      remainder_scheme_(grid_, cfg_.mass, cfg_.dt) {
  require_cubic_grid(grid_);
}

SimulationState StochasticSimulator::initial_state(const SpectralField& phi0, InitialGaussian z0) const {
  check_same_grid(grid_, phi0.grid());
  SimulationState s{0, phi0, SpectralField(grid_)};
  if (z0 == InitialGaussian::stationary) {
    s.gaussian = noise_.stationary_sample(grid_, cfg_.mass);
    s.remainder -= s.gaussian;
  }
  return s;
}

SimulationState StochasticSimulator::step(const SimulationState& state, const WickFields& wick) const {
  const double lin = cfg_.alpha + cfg_.mass;
  SimulationState next{state.step + 1, state.remainder, SpectralField(grid_)};
  remainder_scheme_.apply(next.remainder, remainder_drift(state.remainder, wick, lin, lin));
  check_finite(next.remainder, state.step, "remainder blew up");
  next.gaussian = ou_step(state.gaussian, cfg_.dt, cfg_.mass, noise_, static_cast<std::uint64_t>(state.step));
  return next;
}

SimulationState StochasticSimulator::advance(SimulationState state, std::int64_t steps,
                                             const Observer& observe) const {
  if (state.step < 0) fail(ErrorCode::invalid_argument, "negative step index");
  for (std::int64_t i = 0; i < steps; ++i) {
    const WickFields w = wick(state.gaussian);
    if (observe) observe(state, w);
    state = step(state, w);
  }
  return state;
}

}  // namespace phi4
