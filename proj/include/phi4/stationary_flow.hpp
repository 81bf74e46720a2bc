#pragma once

// Stationary solution by burn-in: Phi(-T_b) = 0 with Z(-T_b) drawn from its
// stationary law, integrated to t = 0 and recorded on [0, T].

#include <cstdint>
#include <vector>

#include "phi4/config.hpp"
#include "phi4/torus.hpp"

namespace phi4 {

/// Step index assigned to t = 0 in a stationary run. Noise for the recorded
/// window [0, T] is therefore the same for every burn-in length at a given
/// dt, which couples runs in the burn-in doubling test.
inline constexpr std::uint64_t kStationaryOrigin = std::uint64_t{1} << 32;

struct StationaryRun {
  double burn_in = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t trajectory = 0;
  double c = 0.0;      // renormalization constant used in Z2 and q
  FieldPath phi;       // a_alpha at stride snapshots on [0, T]
  FieldPath gaussian;  // Z at the same times
  FieldPath q;         // :a_alpha^2:
};

/// Burn-in sample of the stationary solution. burn_in must be a non-negative
/// multiple of cfg.dt.
StationaryRun sample_stationary(const SolverConfig& cfg, double burn_in, std::uint32_t trajectory = 0);

/// q = (Phi - Z)^2 + 2 (Phi - Z) Z + (Z^2 - c), products dealiased.
SpectralField renormalized_square(const SpectralField& phi, const SpectralField& z, double c);
FieldPath renormalized_square(const FieldPath& phi, const FieldPath& z, double c);

/// q(t, x) = kappa on [0, T], one snapshot.
FieldPath deterministic_potential(double kappa, const SolverConfig& cfg);

/// Spatial means of Phi^2 and Phi^4 used by the burn-in tests.
struct Observables {
  double mean_sq = 0.0;
  double mean_quartic = 0.0;
};
Observables spatial_observables(const SpectralField& phi);

struct BurnInStep {
  double burn_in = 0.0;
  double delta_sq = 0.0;  // paired mean change of mean(Phi^2) from T_b to 2 T_b
  double se_sq = 0.0;     // its standard error over trajectories
  double delta_quartic = 0.0;
  double se_quartic = 0.0;
  bool accepted = false;
};

struct BurnInCalibration {
  double burn_in = 0.0;
  bool converged = false;
  std::vector<BurnInStep> history;
};

/// Doubles the burn-in from `initial` until the observables at t = 0 move by
/// less than `threshold` standard errors between T_b and 2 T_b; the move and
/// its error are paired over `trajectories` trajectories of cfg.seed.
BurnInCalibration calibrate_burn_in(const SolverConfig& cfg, double initial, int trajectories,
                                    int max_doublings = 6, double threshold = 1.0);

}  // namespace phi4
