#pragma once

// Linearization dv/dt = Laplacian v + alpha v - 3 q(t) v along a potential
// path, its adjoint, the L2 operator norm of the propagator and the
// finite-time Lyapunov exponent lambda_T = log(||S||) / T.
//
// The potential is piecewise constant in time. On a segment of length h with
// snapshot q_i the propagator is exp(h A_i), A_i = Laplacian + alpha - 3 q_i,
// applied without time discretization error: the scalar part
// alpha - 3 mean(q_i) is exponentiated exactly and the remainder by Lanczos.
// Norms are carried in log space so that very large or small growth does not
// overflow.

#include <cstdint>
#include <vector>

#include "phi4/config.hpp"
#include "phi4/torus.hpp"

namespace phi4 {

struct PotentialPath {
  std::vector<SpectralField> snapshots;  // q on [i * spacing, (i + 1) * spacing)
  double spacing = 0.0;                  // ignored for a single snapshot
  double horizon = 0.0;
  double offset = 0.0;  // constant added to every snapshot

  /// Time-independent potential on [0, horizon].
  static PotentialPath constant(SpectralField q, double horizon);
  /// Uses the snapshots of a recorded path; the last one may be unused.
  static PotentialPath from_field_path(const FieldPath& q, double horizon);

  /// Same path with q replaced by q + s (stored in `offset`, snapshots shared).
  PotentialPath shifted(double s) const;

  const TorusGrid& grid() const;
  std::size_t num_segments() const;
  /// Throws unless the snapshots cover [0, horizon] on one grid.
  void validate() const;
};

struct FtleOptions {
  double tol = 1e-12;       // power iteration: relative change of sigma
  int max_iter = 200;
  double krylov_tol = 1e-13;
  int krylov_dim = 60;
  std::uint64_t start_seed = 0x5eedULL;  // perturbation of the start vector
};

/// v(T) = exp(log_scale) * direction with ||direction||_L2 = 1 (or 0).
struct ScaledField {
  SpectralField direction;
  double log_scale = 0.0;

  SpectralField value() const;
};

/// Propagator S of the linearization along a fixed potential path. Segment
/// data (mean, fluctuation on the grid) is prepared once.
class TangentPropagator {
 public:
  TangentPropagator(const PotentialPath& q, double alpha, const FtleOptions& opts = {});

  const TorusGrid& grid() const noexcept { return grid_; }
  double horizon() const noexcept { return horizon_; }

  ScaledField forward(const SpectralField& v0) const;
  /// S^*: the same segments in reverse order (each segment is self-adjoint).
  ScaledField adjoint(const SpectralField& w0) const;

 private:
  struct Segment {
    double length = 0.0;
    double rate = 0.0;                // alpha - 3 (offset + mean q_i)
    std::vector<double> fluctuation;  // -3 (q_i - mean q_i) on the grid, empty if negligible
  };

  void apply_segment(const Segment& s, SpectralField& v, double& log_scale) const;

  TorusGrid grid_;
  double horizon_;
  FtleOptions opts_;
  std::vector<Segment> segments_;
};

SpectralField tangent_flow(const SpectralField& v0, const PotentialPath& q, double alpha,
                           const FtleOptions& opts = {});
SpectralField adjoint_flow(const SpectralField& w0, const PotentialPath& q, double alpha,
                           const FtleOptions& opts = {});

struct OperatorNorm {
  double log_sigma = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> history;  // log ||S x_k|| per iteration

  double sigma() const;
};

/// Power iteration on S^* S from the constant mode plus a fixed-seed
/// perturbation of relative size 1e-3.
OperatorNorm operator_norm(const PotentialPath& q, double alpha, const FtleOptions& opts = {});

struct FtleSample {
  double alpha = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  double lambda_T = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

FtleSample ftle(const PotentialPath& q, double alpha, std::uint64_t seed = 0, const FtleOptions& opts = {});

}  // namespace phi4
