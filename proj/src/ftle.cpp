#include "phi4/ftle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "phi4/error.hpp"

namespace phi4 {

namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

// A fluctuation whose effect over a segment is below this size cannot change
// the propagator in double precision and is dropped.
constexpr double kNegligible = 4e-16;

// Scales v to unit L2 norm and returns log of the old norm.
double normalize(SpectralField& v) {
  const double n = l2_norm_spectral(v);
  if (n == 0.0) return -std::numeric_limits<double>::infinity();
  v *= 1.0 / n;
  return std::log(n);
}

}  // namespace

SpectralField ScaledField::value() const { return std::exp(log_scale) * direction; }

PotentialPath PotentialPath::constant(SpectralField q, double horizon) {
  PotentialPath p;
  p.snapshots.push_back(std::move(q));
  p.spacing = horizon;
  p.horizon = horizon;
  return p;
}

PotentialPath PotentialPath::from_field_path(const FieldPath& q, double horizon) {
  if (q.t0 != 0.0) fail(ErrorCode::misaligned, "potential path must start at t = 0");
  PotentialPath p;
  p.snapshots = q.snapshots;
  p.spacing = q.spacing;
  p.horizon = horizon;
  p.validate();
  return p;
}

PotentialPath PotentialPath::shifted(double s) const {
  PotentialPath p = *this;
  p.offset += s;
  return p;
}

const TorusGrid& PotentialPath::grid() const {
  if (snapshots.empty()) fail(ErrorCode::invalid_argument, "empty potential path");
  return snapshots.front().grid();
}

std::size_t PotentialPath::num_segments() const {
  if (snapshots.size() <= 1) return 1;
  const double r = horizon / spacing;
  const double n = std::round(r);
  return static_cast<std::size_t>(std::abs(r - n) < 1e-9 * std::max(n, 1.0) ? n : std::ceil(r));
}

void PotentialPath::validate() const {
  if (snapshots.empty()) fail(ErrorCode::invalid_argument, "empty potential path");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    fail(ErrorCode::invalid_argument, "potential path horizon must be > 0");
  if (!std::isfinite(offset)) fail(ErrorCode::invalid_argument, "potential offset must be finite");
  if (snapshots.size() > 1 && !(spacing > 0.0))
    fail(ErrorCode::invalid_argument, "potential path spacing must be > 0");
  if (snapshots.size() < num_segments())
    fail(ErrorCode::misaligned, "potential snapshots do not cover [0, T]");
  for (const auto& s : snapshots) {
    check_same_grid(snapshots.front().grid(), s.grid());
    if (!s.all_finite()) fail(ErrorCode::invalid_argument, "potential contains non-finite values");
  }
}

// ---------------------------------------------------------------------------

TangentPropagator::TangentPropagator(const PotentialPath& q, double alpha, const FtleOptions& opts)
    : grid_(q.grid()), horizon_(q.horizon), opts_(opts) {
  q.validate();
  if (!std::isfinite(alpha)) fail(ErrorCode::invalid_argument, "alpha must be finite");
  if (opts.krylov_dim < 2) fail(ErrorCode::invalid_argument, "Krylov dimension must be >= 2");
  const std::size_t n = q.num_segments();
  const double base = alpha - 3.0 * q.offset;
  segments_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Segment& s = segments_[i];
    const double start = static_cast<double>(i) * q.spacing;
    s.length = n == 1 ? q.horizon : std::min(q.spacing, q.horizon - start);
    const SpectralField& qi = q.snapshots[i];
    s.rate = base - 3.0 * qi.mean();
    auto values = to_physical(qi);
    const double m = qi.mean();
    double sup = 0.0;
    for (double& x : values) {
      x = -3.0 * (x - m);
      sup = std::max(sup, std::abs(x));
    }
    if (sup * s.length > kNegligible) s.fluctuation = std::move(values);
  }
}

void TangentPropagator::apply_segment(const Segment& s, SpectralField& v, double& log_scale) const {
  log_scale += s.length * s.rate;
  const auto& nsq = grid_.norm_sq_table();

  if (s.fluctuation.empty()) {
    auto c = v.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::exp(-kFourPiSq * nsq[k] * s.length);
    log_scale += normalize(v);
    return;
  }

  auto apply_op = [&](const SpectralField& x) {
    auto phys = to_physical(x);
    for (std::size_t p = 0; p < phys.size(); ++p) phys[p] *= s.fluctuation[p];
    SpectralField y = to_spectral(grid_, phys);
    auto yc = y.coeffs();
    const auto xc = x.coeffs();
    for (std::size_t k = 0; k < yc.size(); ++k) yc[k] -= kFourPiSq * nsq[k] * xc[k];
    return y;
  };

  const int mmax = opts_.krylov_dim;
  double remaining = s.length;
  double tau = s.length;
  std::vector<SpectralField> basis;
  basis.reserve(mmax + 1);
  std::vector<double> diag, off;

  while (remaining > 0.0) {
    tau = std::min(tau, remaining);
    log_scale += normalize(v);
    basis.clear();
    diag.clear();
    off.clear();
    basis.push_back(v);

    bool done = false;
    Eigen::VectorXd coeffs;
    double shift = 0.0;
    for (int j = 0; j < mmax && !done; ++j) {
      SpectralField u = apply_op(basis[j]);
      diag.push_back(l2_inner(basis[j], u));
      u.axpy(-diag[j], basis[j]);
      if (j > 0) u.axpy(-off[j - 1], basis[j - 1]);
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) u.axpy(-l2_inner(basis[i], u), basis[i]);
      const double beta = l2_norm_spectral(u);

      const int m = j + 1;
      const bool breakdown = beta <= 1e-14 * std::max(1.0, std::abs(diag[j]));
      const bool check = breakdown || m == mmax || (m >= 4 && m % 4 == 0);
      if (check) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(diag.data(), m);
        Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(off.data(), m - 1))
                                  : Eigen::VectorXd();
        es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
        const auto& lam = es.eigenvalues();
        const auto& q = es.eigenvectors();
        shift = lam.maxCoeff();
        Eigen::VectorXd w(m);
        for (int i = 0; i < m; ++i) w[i] = q(0, i) * std::exp(tau * (lam[i] - shift));
        coeffs = q * w;
        const double err = beta * std::abs(coeffs[m - 1]);
        if (breakdown || err <= opts_.krylov_tol * coeffs.norm()) done = true;
      }
      if (!done) {
        off.push_back(beta);
        u *= 1.0 / beta;
        basis.push_back(std::move(u));
      }
    }

    if (!done) {
      tau *= 0.5;
      if (tau < 1e-14 * s.length) fail(ErrorCode::not_converged, "Krylov exponential did not converge");
      continue;
    }
    SpectralField out(grid_);
    for (int i = 0; i < coeffs.size(); ++i) out.axpy(coeffs[i], basis[i]);
    v = std::move(out);
    log_scale += tau * shift;
    remaining -= tau;
    if (remaining < 1e-15 * s.length) remaining = 0.0;
  }
  log_scale += normalize(v);
}

ScaledField TangentPropagator::forward(const SpectralField& v0) const {
  check_same_grid(grid_, v0.grid());
  ScaledField r{v0, 0.0};
  r.log_scale = normalize(r.direction);
  if (!std::isfinite(r.log_scale)) return r;
  for (const auto& s : segments_) apply_segment(s, r.direction, r.log_scale);
  if (!r.direction.all_finite() || std::isnan(r.log_scale))
    throw BlowUpError(static_cast<std::int64_t>(segments_.size()), "tangent flow is not finite");
  return r;
}

ScaledField TangentPropagator::adjoint(const SpectralField& w0) const {
  check_same_grid(grid_, w0.grid());
  ScaledField r{w0, 0.0};
  r.log_scale = normalize(r.direction);
  if (!std::isfinite(r.log_scale)) return r;
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) apply_segment(*it, r.direction, r.log_scale);
  if (!r.direction.all_finite() || std::isnan(r.log_scale))
    throw BlowUpError(static_cast<std::int64_t>(segments_.size()), "adjoint flow is not finite");
  return r;
}

SpectralField tangent_flow(const SpectralField& v0, const PotentialPath& q, double alpha, const FtleOptions& opts) {
  return TangentPropagator(q, alpha, opts).forward(v0).value();
}

SpectralField adjoint_flow(const SpectralField& w0, const PotentialPath& q, double alpha, const FtleOptions& opts) {
  return TangentPropagator(q, alpha, opts).adjoint(w0).value();
}

// ---------------------------------------------------------------------------

double OperatorNorm::sigma() const { return std::exp(log_sigma); }

OperatorNorm operator_norm(const PotentialPath& q, double alpha, const FtleOptions& opts) {
  if (!(opts.tol > 0.0)) fail(ErrorCode::invalid_argument, "power iteration tolerance must be > 0");
  if (opts.max_iter < 1) fail(ErrorCode::invalid_argument, "max_iter must be >= 1");
  const TangentPropagator prop(q, alpha, opts);
  const TorusGrid& g = prop.grid();

  SpectralField x = SpectralField::constant(g, 1.0);
  SpectralField p = gaussian_field(g, NoiseKey{opts.start_seed, 0, 0, StreamTag::power_iteration},
                                   [](int) { return 1.0; });
  normalize(p);
  x.axpy(1e-3, p);
  normalize(x);

  OperatorNorm out;
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iter; ++it) {
    ScaledField y = prop.forward(x);
    out.iterations = it;
    out.log_sigma = y.log_scale;
    out.history.push_back(y.log_scale);
    out.residual = std::isfinite(prev) ? std::abs(std::expm1(y.log_scale - prev))
                                       : std::numeric_limits<double>::infinity();
    if (out.residual <= opts.tol) {
      out.converged = true;
      break;
    }
    prev = y.log_scale;
    x = prop.adjoint(y.direction).direction;
  }
  return out;
}

FtleSample ftle(const PotentialPath& q, double alpha, std::uint64_t seed, const FtleOptions& opts) {
  const OperatorNorm n = operator_norm(q, alpha, opts);
  FtleSample s;
  s.alpha = alpha;
  s.horizon = q.horizon;
  s.seed = seed;
  s.lambda_T = n.log_sigma / q.horizon;
  s.iterations = n.iterations;
  s.residual = n.residual;
  s.converged = n.converged;
  return s;
}

}  // namespace phi4
