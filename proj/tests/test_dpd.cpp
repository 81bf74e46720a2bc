#include <doctest.h>

#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "oracles.hpp"
#include "phi4/dpd_solver.hpp"
#include "phi4/error.hpp"
#include "phi4/littlewood_paley.hpp"

using namespace phi4;

namespace {

SolverConfig small_config(int dim, int n, double dt, double horizon, double alpha) {
  SolverConfig cfg;
  cfg.dim = dim;
  cfg.cutoff = n;
  cfg.dt = dt;
  cfg.horizon = horizon;
  cfg.alpha = alpha;
  return cfg;
}

// Truncated product with untruncated intermediates, via a wider grid.
SpectralField exact_product(const SpectralField& a, const SpectralField& b, const SpectralField& c) {
  const TorusGrid& g = a.grid();
  const TorusGrid wide(g.dim(), 2 * g.cutoff());
  const auto ab = oracle::convolve(resample(a, wide), resample(b, wide));
  return resample(oracle::convolve(ab, resample(c, wide)), g);
}

// Galerkin right-hand side of the remainder equation with frozen Wick fields.
struct GalerkinRhs {
  const WickFields& z;
  double mass;
  double linear;
  void operator()(const std::vector<double>& x, std::vector<double>& dx, double) const {
    const TorusGrid& g = z.z1.grid();
    std::vector<Complex> c(g.num_modes());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = {x[2 * i], x[2 * i + 1]};
    const SpectralField r(g, c);
    const SpectralField one = SpectralField::constant(g, 1.0);
    SpectralField gr = -1.0 * exact_product(r, r, r);
    gr.axpy(-3.0, exact_product(r, r, z.z1));
    gr.axpy(-3.0, exact_product(r, z.z2, one));
    gr -= z.z3;
    gr.axpy(linear, r);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Complex v = -mode_rate(g.norm_sq(i), mass) * c[i] + gr.coeffs()[i];
      dx[2 * i] = v.real();
      dx[2 * i + 1] = v.imag();
    }
  }
};

}  // namespace

TEST_CASE("spatially constant remainder follows the scalar ODE") {
  for (double alpha : {-1.0, 0.0, 2.0}) {
    double prev = 0.0;
    for (double dt : {2e-3, 1e-3, 5e-4}) {
      auto cfg = small_config(2, 4, dt, 1.0, alpha);
      const auto triple = WickTriple::zeros(cfg.grid(), cfg.num_steps(), dt);
      const auto sol = solve_psi(SpectralField::constant(cfg.grid(), 0.8), triple, cfg);
      CHECK(sol.psi.size() == static_cast<std::size_t>(cfg.num_steps() + 1));
      const double err = std::abs(sol.remainder.snapshots.back().mean() - oracle::cubic_ode(0.8, alpha, 1.0));
      CHECK(err < 2.0 * dt);
      if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.05));
      prev = err;
    }
  }
}

TEST_CASE("zero data stays zero") {
  auto cfg = small_config(2, 4, 1e-2, 0.5, 3.0);
  const auto triple = WickTriple::zeros(cfg.grid(), cfg.num_steps(), cfg.dt);
  const auto sol = solve_psi(SpectralField(cfg.grid()), triple, cfg);
  for (const auto& s : sol.psi.snapshots) CHECK(l2_norm_spectral(s) == 0.0);
}

TEST_CASE("Galerkin ODE oracle at N = 2") {
  namespace ode = boost::numeric::odeint;
  const TorusGrid g(2, 2);
  const WickFields z = wick_powers(oracle::random_field(g, 31, 0.7), 0.2);
  const SpectralField r0 = oracle::random_field(g, 32, 0.5);
  const double alpha = 0.5, horizon = 0.1;

  std::vector<double> x(2 * g.num_modes());
  for (std::size_t i = 0; i < g.num_modes(); ++i) {
    x[2 * i] = r0.coeffs()[i].real();
    x[2 * i + 1] = r0.coeffs()[i].imag();
  }
  const GalerkinRhs rhs{z, 1.0, alpha + 1.0};
  ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<std::vector<double>>()),
                          rhs, x, 0.0, horizon, 1e-4);
  std::vector<Complex> c(g.num_modes());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = {x[2 * i], x[2 * i + 1]};
  const SpectralField ref(g, c);

  double prev = 0.0;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    auto cfg = small_config(2, 2, dt, horizon, alpha);
    WickTriple t;
    t.dt = dt;
    t.snapshots.assign(static_cast<std::size_t>(cfg.num_steps()), z);
    const auto sol = solve_psi(r0, t, cfg);
    const double err = l2_norm_spectral(sol.remainder.snapshots.back() - ref);
    MESSAGE("dt " << dt << " error " << err);
    CHECK(err < 10.0 * dt);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("solve_psi input checks") {
  auto cfg = small_config(2, 4, 1e-2, 0.1, 0.0);
  const auto g = cfg.grid();
  CHECK_THROWS_AS(solve_psi(SpectralField(g), WickTriple::zeros(g, 5, 1e-2), cfg), Error);
  CHECK_THROWS_AS(solve_psi(SpectralField(g), WickTriple::zeros(g, 10, 2e-2), cfg), Error);
  try {
    solve_psi(SpectralField(g), WickTriple::zeros(g, 10, 2e-2), cfg);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::misaligned);
  }
  cfg.snapshot_stride = 5;
  const auto sol = solve_psi(SpectralField(g), WickTriple::zeros(g, 10, 1e-2), cfg);
  CHECK(sol.psi.size() == 3);
  CHECK(sol.psi.spacing == doctest::Approx(5e-2));
}

TEST_CASE("solve_J examples") {
  auto cfg = small_config(2, 4, 1e-3, 1.0, -1.0);
  const auto g = cfg.grid();
  const auto zero = FieldPath::constant(SpectralField(g));
  const auto still = solve_J(SpectralField(g), zero, 0.0, cfg);
  CHECK(l2_norm_spectral(still.snapshots.back()) == 0.0);

  // Constant data: Phi' = (3c + alpha) Phi - Phi^3.
  const auto sol = solve_J(SpectralField::constant(g, 0.5), zero, 0.4, cfg);
  CHECK(std::abs(sol.snapshots.back().mean() - oracle::cubic_ode(0.5, 0.2, 1.0)) < 2e-3);

  // Constant forcing f = k^3 - a k keeps Phi = k in equilibrium up to rounding.
  const double k = 1.3, a = 3 * 0.4 + cfg.alpha;
  const auto eq = solve_J(SpectralField::constant(g, k), FieldPath::constant(SpectralField::constant(g, k * k * k - a * k)), 0.4, cfg);
  CHECK(std::abs(eq.snapshots.back().mean() - k) < 1e-12);

  // Without forcing and with alpha < 0 the L2 norm decreases.
  const auto dec = solve_J(oracle::random_field(g, 5), zero, 0.0, cfg);
  for (std::size_t i = 1; i < dec.size(); ++i) CHECK(l2_norm(dec.snapshots[i]) <= l2_norm(dec.snapshots[i - 1]));
  CHECK_THROWS_AS(solve_J(SpectralField(g), zero, -0.1, cfg), Error);
  CHECK_THROWS_AS(solve_J(SpectralField(g), FieldPath{}, 0.0, cfg), Error);
}

TEST_CASE("paraproduct split recovers the drift") {
  const TorusGrid g(2, 8);
  const auto r = oracle::random_field(g, 40, 2.0);
  const WickFields z = wick_powers(oracle::random_field(g, 41), 0.3);
  const auto full = -1.0 * dealiased_product(r, r, r) - 3.0 * dealiased_product(dealiased_product(r, r), z.z1) -
                    3.0 * dealiased_product(r, z.z2) - z.z3;
  for (int n : {0, 1, 2, 5}) {
    const auto s = u_split(r, z, n);
    CHECK(l2_norm_spectral(s.u1 + s.u2 + s.cubic - full) <= 1e-12 * l2_norm_spectral(full));
    const auto same = u_split(r, z, n, r);
    CHECK(l2_norm_spectral(same.cubic) <= 1e-14 * l2_norm_spectral(s.cubic));
  }
  // With Z2 = Z3 = 0 and n past the top block, U1 vanishes.
  const WickFields only_z1{z.z1, SpectralField(g), SpectralField(g)};
  CHECK(l2_norm_spectral(u_split(r, only_z1, max_block(g)).u1) == 0.0);
  CHECK(u_split_level(0.5, 0.1) == 1);
  CHECK(u_split_level(1024.0, 0.1) == 6);
  CHECK_THROWS_AS(u_split(r, z, -1), Error);
}

TEST_CASE("flow property and determinism") {
  auto cfg = small_config(2, 6, 1e-3, 0.1, 1.0);
  cfg.seed = 77;
  const StochasticSimulator sim(cfg, 3);
  const auto s0 = sim.initial_state(oracle::random_field(sim.grid(), 1), InitialGaussian::stationary);
  CHECK(l2_norm_spectral(s0.phi() - oracle::random_field(sim.grid(), 1)) <= 1e-15 * l2_norm_spectral(s0.phi()));
  const auto direct = sim.advance(s0, 100);
  const auto split = sim.advance(sim.advance(s0, 37), 63);
  CHECK(direct.step == 100);
  CHECK(l2_norm_spectral(direct.remainder - split.remainder) == 0.0);
  CHECK(l2_norm_spectral(direct.gaussian - split.gaussian) == 0.0);

  const StochasticSimulator twin(cfg, 3);
  const auto again = twin.advance(twin.initial_state(oracle::random_field(sim.grid(), 1), InitialGaussian::stationary), 100);
  CHECK(l2_norm_spectral(again.phi() - direct.phi()) == 0.0);

  int seen = 0;
  sim.advance(s0, 10, [&](const SimulationState& st, const WickFields&) { CHECK(st.step == seen++); });
  CHECK(seen == 10);
}

TEST_CASE("silent noise with Z = 0 reduces to the deterministic equation") {
  auto cfg = small_config(2, 4, 1e-3, 0.2, 0.5);
  cfg.noise_amplitude = 0.0;
  const StochasticSimulator sim(cfg);
  CHECK(sim.wick_shift() == 0.0);
  const auto phi0 = SpectralField::constant(sim.grid(), 0.3);
  const auto end = sim.advance(sim.initial_state(phi0, InitialGaussian::stationary), cfg.num_steps());
  const auto j = solve_J(phi0, FieldPath::constant(SpectralField(sim.grid())), 0.0, cfg);
  CHECK(std::abs(end.phi().mean() - j.snapshots.back().mean()) < 1e-3);
  CHECK(std::abs(end.phi().mean() - oracle::cubic_ode(0.3, 0.5, 0.2)) < 1e-3);
}

TEST_CASE("blow-up is reported with its step") {
  auto cfg = small_config(2, 4, 0.5, 5.0, 0.0);
  const auto g = cfg.grid();
  const auto triple = WickTriple::zeros(g, cfg.num_steps(), cfg.dt);
  try {
    solve_psi(SpectralField::constant(g, 50.0), triple, cfg);
    CHECK(false);
  } catch (const BlowUpError& e) {
    CHECK(e.code() == ErrorCode::blow_up);
    CHECK(e.step() >= 0);
  }
}

TEST_CASE("diagnostics") {
  auto cfg = small_config(2, 8, 1e-3, 0.1, 0.0);
  const auto g = cfg.grid();
  const auto r = oracle::random_field(g, 3);
  const auto z = wick_powers(oracle::random_field(g, 4), 0.1);
  const auto d = diagnose(r, z, cfg, false);
  CHECK(d.r_sup == doctest::Approx(sup_norm(r)));
  CHECK(std::isnan(d.u1_norm));
  const auto e = diagnose(r, z, cfg, true);
  CHECK(std::isfinite(e.u1_norm));
  CHECK(std::isfinite(e.u2_norm));
}
