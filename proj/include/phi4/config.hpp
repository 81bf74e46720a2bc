#pragma once

#include <cstdint>
#include <vector>

#include "phi4/torus.hpp"

namespace phi4 {

/// Reproducibility contract for one trajectory: grid, time stepping,
/// bifurcation parameter, mass of the Gaussian part and seed.
struct SolverConfig {
  int dim = 2;
  int cutoff = 8;
  int phys_points = 0;  // 0: default padding (smallest even M >= 4N+1)
  double dt = 1e-3;
  double horizon = 1.0;
  double alpha = 0.0;
  double mass = 1.0;
  std::uint64_t seed = 0;
  int snapshot_stride = 1;
  double epsilon = 0.1;
  double noise_amplitude = 1.0;
  double noise_dt = 0.0;  // base grid of the noise; 0 means dt
  double diag_delta = 1.8;

  void validate() const;
  TorusGrid grid() const { return TorusGrid(dim, cutoff, phys_points); }
  /// round(horizon / dt); validate() checks the ratio is integral.
  std::int64_t num_steps() const;
  double effective_noise_dt() const { return noise_dt > 0.0 ? noise_dt : dt; }
  /// Renormalization constant used for :Z^2:, :Z^3:: sigma^2 C_N in d = 2,
  /// zero in d = 1 where no renormalization is needed.
  double wick_shift() const;
};

/// Snapshots at t_i = t0 + i * spacing, read piecewise-constant on
/// [t_i, t_{i+1}); the last snapshot extends to +infinity. A single snapshot
/// is a time-independent path.
struct FieldPath {
  std::vector<SpectralField> snapshots;
  double spacing = 0.0;
  double t0 = 0.0;

  static FieldPath constant(SpectralField f);

  std::size_t size() const noexcept { return snapshots.size(); }
  bool empty() const noexcept { return snapshots.empty(); }
  const SpectralField& at_time(double t) const;
  double time(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * spacing; }
};

}  // namespace phi4
