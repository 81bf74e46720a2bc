#include "phi4/wick.hpp"

#include <cmath>
#include <numbers>

#include "phi4/error.hpp"

namespace phi4 {

double mode_rate(int norm_sq, double mass) noexcept {
  return mass + 4.0 * std::numbers::pi * std::numbers::pi * norm_sq;
}

double wick_constant(const TorusGrid& grid, double mass) {
  if (!(mass > 0.0)) fail(ErrorCode::invalid_argument, "Wick constant requires mass m > 0");
  double sum = 0.0;
  for (int nsq : grid.norm_sq_table()) sum += 1.0 / (2.0 * mode_rate(nsq, mass));
  return sum;
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint32_t trajectory, double base_dt, double amplitude)
    : seed_(seed), trajectory_(trajectory), base_dt_(base_dt), amplitude_(amplitude) {
  if (!(base_dt > 0.0)) fail(ErrorCode::invalid_argument, "noise base step must be positive");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    fail(ErrorCode::invalid_argument, "noise amplitude must be finite and >= 0");
}

int NoiseStream::substeps(double h) const {
  if (!(h > 0.0)) fail(ErrorCode::invalid_argument, "OU step requires h > 0");
  const double ratio = h / base_dt_;
  const double r = std::round(ratio);
  if (r < 1.0 || std::abs(ratio - r) > 1e-9 * r)
    fail(ErrorCode::invalid_argument, "step size must be an integer multiple of the noise base step");
  return static_cast<int>(r);
}

SpectralField NoiseStream::increment(const TorusGrid& grid, double mass, double h,
                                     std::uint64_t step) const {
  const int s = substeps(h);
  SpectralField eta(grid);
  if (amplitude_ == 0.0) return eta;
  auto c = eta.coeffs();
  const std::size_t zero = grid.zero_index();
  for (std::size_t i = zero; i < c.size(); ++i) {
    const Mode k = grid.mode(i);
    const double mu = mode_rate(grid.norm_sq(i), mass);
    const double decay = std::exp(-mu * base_dt_);
    const double var = -std::expm1(-2.0 * mu * base_dt_) / (2.0 * mu);
    Complex acc{};
    for (int j = 0; j < s; ++j) {
      const auto z = gaussian_pair(
          NoiseKey{seed_, trajectory_, step * static_cast<std::uint64_t>(s) + j, StreamTag::ou_increment},
          k.k1, k.k2);
      acc *= decay;
      if (i == zero)
        acc += std::sqrt(var) * z[0];
      else
        acc += std::sqrt(0.5 * var) * Complex(z[0], z[1]);
    }
    c[i] = amplitude_ * acc;
    if (i != zero) c[grid.conjugate_index(i)] = std::conj(c[i]);
  }
  return eta;
}

SpectralField NoiseStream::stationary_sample(const TorusGrid& grid, double mass) const {
  if (!(mass > 0.0)) fail(ErrorCode::invalid_argument, "stationary law requires mass m > 0");
  const double a2 = amplitude_ * amplitude_;
  return gaussian_field(grid, NoiseKey{seed_, trajectory_, 0, StreamTag::stationary_init},
                        [&](int nsq) { return a2 / (2.0 * mode_rate(nsq, mass)); });
}

SpectralField ou_step(const SpectralField& z, double h, double mass, const NoiseStream& noise,
                      std::uint64_t step) {
  SpectralField out = noise.increment(z.grid(), mass, h, step);
  const auto& nsq = z.grid().norm_sq_table();
  auto c = out.coeffs();
  const auto zc = z.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += std::exp(-mode_rate(nsq[i], mass) * h) * zc[i];
  return out;
}

SpectralField sample_stationary_z(const TorusGrid& grid, double mass, std::uint64_t seed) {
  return NoiseStream(seed, 0, 1.0).stationary_sample(grid, mass);
}

WickFields wick_powers(const SpectralField& z, double c) {
  const TorusGrid& g = z.grid();
  if (!g.cubic_exact())
    fail(ErrorCode::invalid_argument, "Wick powers need M >= 4N+1 to be alias-free");
  const auto x = to_physical(z);
  std::vector<double> sq(x.size()), cube(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sq[i] = x[i] * x[i];
    cube[i] = sq[i] * x[i];
  }
  SpectralField z2 = to_spectral(g, sq);
  SpectralField z3 = to_spectral(g, cube);
  z2.coeffs()[g.zero_index()] -= c;
  z3.axpy(-3.0 * c, z);
  return {z, std::move(z2), std::move(z3)};
}

WickTriple WickTriple::from_path(const std::vector<SpectralField>& z1, double c, double dt) {
  WickTriple t;
  t.c_used = c;
  t.dt = dt;
  t.snapshots.reserve(z1.size());
  for (const auto& z : z1) t.snapshots.push_back(wick_powers(z, c));
  return t;
}

WickTriple WickTriple::zeros(const TorusGrid& grid, std::size_t n, double dt) {
  WickTriple t;
  t.dt = dt;
  t.snapshots.assign(n, WickFields{SpectralField(grid), SpectralField(grid), SpectralField(grid)});
  return t;
}

}  // namespace phi4
