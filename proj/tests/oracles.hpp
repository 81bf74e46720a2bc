#pragma once

// Independent reference computations used only by tests: dense operator
// matrices in the Fourier basis, direct convolutions and scalar ODE solutions.

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "phi4/torus.hpp"

namespace oracle {

using phi4::Complex;

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

// Dense generator (Laplacian + alpha - 3 q) on the band for a fixed q.
inline Eigen::MatrixXcd linearization_matrix(const phi4::SpectralField& q, double alpha) {
  const phi4::TorusGrid& g = q.grid();
  const int n = g.cutoff();
  const auto dim = static_cast<Eigen::Index>(g.num_modes());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < g.num_modes(); ++i) {
    const auto k = g.mode(i);
    a(i, i) += -kFourPiSq * g.norm_sq(i) + alpha;
    for (std::size_t j = 0; j < g.num_modes(); ++j) {
      const auto l = g.mode(j);
      const int d1 = k.k1 - l.k1, d2 = k.k2 - l.k2;
      if (std::abs(d1) > n || std::abs(d2) > n) continue;
      a(i, j) += -3.0 * q.coeff(d1, d2);
    }
  }
  return a;
}

// exp(t A) for Hermitian A.
inline Eigen::MatrixXcd hermitian_expm(const Eigen::MatrixXcd& a, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  const Eigen::VectorXd ev = (t * es.eigenvalues().array()).exp();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline Eigen::VectorXcd to_vector(const phi4::SpectralField& f) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = f.coeffs()[i];
  return v;
}

inline phi4::SpectralField from_vector(const phi4::TorusGrid& g, const Eigen::VectorXcd& v) {
  std::vector<Complex> c(v.data(), v.data() + v.size());
  return phi4::SpectralField(g, std::move(c));
}

// Full linear convolution of two coefficient arrays truncated to the band.
inline phi4::SpectralField convolve(const phi4::SpectralField& a, const phi4::SpectralField& b) {
  const phi4::TorusGrid& g = a.grid();
  const int n = g.cutoff();
  std::vector<Complex> out(g.num_modes());
  for (std::size_t i = 0; i < g.num_modes(); ++i) {
    const auto k = g.mode(i);
    Complex s{};
    for (std::size_t j = 0; j < g.num_modes(); ++j) {
      const auto l = g.mode(j);
      const int d1 = k.k1 - l.k1, d2 = k.k2 - l.k2;
      if (std::abs(d1) > n || std::abs(d2) > n) continue;
      s += a.coeffs()[j] * b.coeff(d1, d2);
    }
    out[i] = s;
  }
  return phi4::SpectralField(g, std::move(out));
}

// Random band-limited field with unit-variance coefficients decaying like 1/(1+|k|^2).
inline phi4::SpectralField random_field(const phi4::TorusGrid& g, std::uint64_t seed, double scale = 1.0) {
  return scale * phi4::gaussian_field(g, phi4::NoiseKey{seed, 7, 0, phi4::StreamTag::auxiliary},
                                      [](int nsq) { return 1.0 / (1.0 + nsq); });
}

// r(t) for r' = a r - r^3, r(0) = r0 (closed form).
inline double cubic_ode(double r0, double a, double t) {
  if (a == 0.0) return r0 / std::sqrt(1.0 + 2.0 * r0 * r0 * t);
  const double e = std::exp(2.0 * a * t);
  return r0 * std::exp(a * t) / std::sqrt(1.0 + r0 * r0 * (e - 1.0) / a);
}

}  // namespace oracle
