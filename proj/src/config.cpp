#include "phi4/config.hpp"

#include <cmath>

#include "phi4/error.hpp"
#include "phi4/wick.hpp"

namespace phi4 {

void SolverConfig::validate() const {
  (void)grid();
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::invalid_argument, "dt must be positive");
  if (!(horizon >= dt)) fail(ErrorCode::invalid_argument, "horizon T must be >= dt");
  const double ratio = horizon / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    fail(ErrorCode::invalid_argument, "horizon T must be an integer multiple of dt");
  if (snapshot_stride < 1) fail(ErrorCode::invalid_argument, "snapshot_stride must be >= 1");
  if (!(mass > 0.0)) fail(ErrorCode::invalid_argument, "mass must be > 0");
  if (!std::isfinite(alpha)) fail(ErrorCode::invalid_argument, "alpha must be finite");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorCode::invalid_argument, "epsilon must lie in (0, 1)");
  if (!(noise_amplitude >= 0.0)) fail(ErrorCode::invalid_argument, "noise_amplitude must be >= 0");
  if (noise_dt < 0.0) fail(ErrorCode::invalid_argument, "noise_dt must be >= 0");
  if (noise_dt > 0.0) {
    const double s = dt / noise_dt;
    if (s < 1.0 - 1e-12 || std::abs(s - std::round(s)) > 1e-9 * s)
      fail(ErrorCode::invalid_argument, "dt must be an integer multiple of noise_dt");
  }
}

std::int64_t SolverConfig::num_steps() const {
  return static_cast<std::int64_t>(std::llround(horizon / dt));
}

double SolverConfig::wick_shift() const {
  if (dim == 1) return 0.0;
  return noise_amplitude * noise_amplitude * wick_constant(grid(), mass);
}

FieldPath FieldPath::constant(SpectralField f) {
  FieldPath p;
  p.snapshots.push_back(std::move(f));
  return p;
}

const SpectralField& FieldPath::at_time(double t) const {
  if (snapshots.empty()) fail(ErrorCode::invalid_argument, "empty field path");
  if (snapshots.size() == 1 || spacing <= 0.0) return snapshots.front();
  const double u = (t - t0) / spacing;
  // Snap to the grid so t = i * spacing lands on snapshot i despite rounding.
  const double r = std::round(u);
  const double idx = std::abs(u - r) < 1e-9 ? r : std::floor(u);
  if (idx <= 0.0) return snapshots.front();
  const auto i = static_cast<std::size_t>(idx);
  return i >= snapshots.size() ? snapshots.back() : snapshots[i];
}

}  // namespace phi4
