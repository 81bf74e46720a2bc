#pragma once

// Remainder equation of the decomposition Phi = R + Z:
//
//   dR/dt = (Laplacian - m) R + G(R, Z1, Z2, Z3)
//   G = -R^3 - 3 R^2 Z1 - 3 R Z2 - Z3 + (alpha + m) R [+ (alpha + m) Z1]
//
// stepped by first-order exponential Euler,
//   R_k <- exp(-mu_k dt) R_k + dt phi1(-mu_k dt) G_k,  phi1(z) = (e^z - 1) / z.
// The bracketed term is present only when Z1 is the OU process of mass m, so
// that R + Z1 solves the renormalized equation with parameter alpha.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "phi4/config.hpp"
#include "phi4/torus.hpp"
#include "phi4/wick.hpp"

namespace phi4 {

/// Per-mode factors exp(-mu_k dt) and dt phi1(-mu_k dt) for mu_k = m + 4 pi^2 |k|^2.
class ExponentialEuler {
 public:
  ExponentialEuler(const TorusGrid& grid, double mass, double dt);
  /// u <- decay * u + weight * g
  void apply(SpectralField& u, const SpectralField& g) const;

 private:
  std::vector<double> decay_;
  std::vector<double> weight_;
};

enum class MassCompensation : bool { off = false, on = true };

/// One exponential-Euler step of the remainder equation. `step` is only used
/// to label a blow-up error.
SpectralField remainder_step(const SpectralField& r, const WickFields& z, const SolverConfig& cfg,
                             MassCompensation comp, std::int64_t step = -1);

struct PsiSolution {
  FieldPath remainder;  // R at stride snapshots, including t = T
  FieldPath psi;        // R + Z1 at the same times
};

/// Psi_alpha(phi0, Z): integrates the remainder equation from R(0) = phi0
/// without mass compensation. Snapshot i of the triple drives step i.
PsiSolution solve_psi(const SpectralField& phi0, const WickTriple& triple, const SolverConfig& cfg);

/// J_alpha(phi0, f, c): dPhi/dt = Laplacian Phi - Phi^3 + (3c + alpha) Phi + f,
/// deterministic, same exponential scheme (pure Laplacian as linear part).
FieldPath solve_J(const SpectralField& phi0, const FieldPath& forcing, double c, const SolverConfig& cfg);

/// Paraproduct splitting of the remainder drift into a singular part U1 and a
/// more regular part U2. The cubic bookkeeping term -(R^3 - R2^3) is returned
/// separately instead of being folded into U2.
struct USplit {
  SpectralField u1;
  SpectralField u2;
  SpectralField cubic;
};

USplit u_split(const SpectralField& r, const WickFields& z, int n,
               const std::optional<SpectralField>& r2 = std::nullopt);

/// Block level n with 2^(-n(2 - 2 eps)) max(||R||_inf, 1) ~ 1, clamped to n >= 1.
int u_split_level(double r_sup, double epsilon) noexcept;

/// A-priori quantities of the remainder monitored along a trajectory.
struct RemainderDiagnostics {
  std::int64_t step = 0;
  double t = 0.0;
  double r_holder = 0.0;  // ||R||_{C^{2-eps}}
  double r_sup = 0.0;     // ||R||_inf
  double u1_norm = 0.0;   // ||U1||_{C^{-eps-delta}}, NaN when not computed
  double u2_norm = 0.0;   // ||U2||_{C^{-eps}}, NaN when not computed
};

RemainderDiagnostics diagnose(const SpectralField& r, const WickFields& z, const SolverConfig& cfg,
                              bool with_split);

/// Full state of a stochastic trajectory at an integer step.
struct SimulationState {
  std::int64_t step = 0;
  SpectralField remainder;
  SpectralField gaussian;

  SpectralField phi() const { return remainder + gaussian; }
};

enum class InitialGaussian { stationary, zero };

/// Stochastic Phi^4 dynamics: Z from the OU stream, R from the remainder
/// equation with mass compensation. A step depends only on the state and the
/// absolute step index, so advancing 0 -> s -> t equals advancing 0 -> t.
class StochasticSimulator {
 public:
  using Observer = std::function<void(const SimulationState&, const WickFields&)>;

  explicit StochasticSimulator(SolverConfig cfg, std::uint32_t trajectory = 0);

  const SolverConfig& config() const noexcept { return cfg_; }
  const TorusGrid& grid() const noexcept { return grid_; }
  const NoiseStream& noise() const noexcept { return noise_; }
  double wick_shift() const noexcept { return shift_; }

  /// Phi(0) = phi0 with Z(0) stationary (or zero); R(0) = phi0 - Z(0).
  SimulationState initial_state(const SpectralField& phi0, InitialGaussian z0) const;

  /// Advances `steps` steps. The observer sees every state visited, including
  /// the starting one, together with its Wick fields; it is not called for
  /// the final state.
  SimulationState advance(SimulationState state, std::int64_t steps, const Observer& observe = {}) const;

  /// One step from `state`.
  SimulationState step(const SimulationState& state, const WickFields& wick) const;

  WickFields wick(const SpectralField& gaussian) const { return wick_powers(gaussian, shift_); }

 private:
  SolverConfig cfg_;
  TorusGrid grid_;
  NoiseStream noise_;
  double shift_;
  ExponentialEuler remainder_scheme_;
};

}  // namespace phi4
