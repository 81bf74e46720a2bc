#pragma once

// Gaussian part of the dynamics: exact Ornstein-Uhlenbeck stepping of
// dZ = (Laplacian - m) Z dt + sigma dW on the Galerkin band, its stationary
// law, the Wick constant C_N and the renormalized powers :Z^2:, :Z^3:.

#include <cstdint>
#include <vector>

#include "phi4/torus.hpp"

namespace phi4 {

/// mu_k = m + 4 pi^2 |k|^2
double mode_rate(int norm_sq, double mass) noexcept;

/// C_N = sum_{|k|_inf <= N} 1 / (2 (m + 4 pi^2 |k|^2)), the stationary
/// pointwise variance of Z. Requires m > 0.
double wick_constant(const TorusGrid& grid, double mass);

/// Space-time white noise on the band, addressed by (seed, trajectory, step).
///
/// Increments are drawn on a base time grid of spacing `base_dt`; a step of
/// size h = s * base_dt aggregates s base increments exactly, so runs at
/// different step sizes sharing a base grid see the same Brownian path.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint32_t trajectory, double base_dt, double amplitude = 1.0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t trajectory() const noexcept { return trajectory_; }
  double base_dt() const noexcept { return base_dt_; }
  double amplitude() const noexcept { return amplitude_; }

  /// Number of base increments in a step of size h; throws unless h is a
  /// positive integer multiple of base_dt.
  int substeps(double h) const;

  /// Stochastic convolution over step `step` of size h:
  /// sigma * int_{t}^{t+h} exp(-(h - (s - t)) mu_k) dW_k(s).
  SpectralField increment(const TorusGrid& grid, double mass, double h, std::uint64_t step) const;

  /// A draw from the stationary law N(0, sigma^2 / (2 mu_k)) per mode.
  SpectralField stationary_sample(const TorusGrid& grid, double mass) const;

 private:
  std::uint64_t seed_;
  std::uint32_t trajectory_;
  double base_dt_;
  double amplitude_;
};

/// Exact OU transition Z_k <- exp(-mu_k h) Z_k + eta_k for step index `step`.
SpectralField ou_step(const SpectralField& z, double h, double mass, const NoiseStream& noise,
                      std::uint64_t step);

/// Stationary Z for (seed, trajectory 0) with unit amplitude.
SpectralField sample_stationary_z(const TorusGrid& grid, double mass, std::uint64_t seed);

/// One synchronized snapshot of the enhanced noise (Z1, Z2, Z3).
struct WickFields {
  SpectralField z1;
  SpectralField z2;
  SpectralField z3;
};

/// (dealiased(Z^2) - c, dealiased(Z^3) - 3 c Z) bundled with Z itself.
WickFields wick_powers(const SpectralField& z, double c);

/// Time-indexed enhanced noise, snapshots at t_i = i * dt.
struct WickTriple {
  std::vector<WickFields> snapshots;
  double c_used = 0.0;
  double dt = 0.0;

  /// Builds Z2, Z3 from a Z1 path; the compatibility identity holds exactly.
  static WickTriple from_path(const std::vector<SpectralField>& z1, double c, double dt);
  /// Zero triple (0, 0, 0) with n snapshots.
  static WickTriple zeros(const TorusGrid& grid, std::size_t n, double dt);

  std::size_t size() const noexcept { return snapshots.size(); }
};

}  // namespace phi4
