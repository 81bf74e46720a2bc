#pragma once

// Band-limited real fields on the unit torus [0,1)^d, d in {1,2}, stored as
// Fourier coefficients f_k for |k|_inf <= N in the basis e_k(x) = exp(2 pi i k.x).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "phi4/rng.hpp"

namespace phi4 {

using Complex = std::complex<double>;

namespace detail {
struct GridTables;
}

struct Mode {
  int k1 = 0;
  int k2 = 0;
};

class TorusGrid {
 public:
  /// `phys_points == 0` selects the smallest even M >= 4N+1, which makes
  /// cubic products alias-free. Any even M >= 3N+1 is accepted.
  TorusGrid(int dim, int cutoff, int phys_points = 0);

  static int default_points(int cutoff) noexcept;

  int dim() const noexcept { return dim_; }
  int cutoff() const noexcept { return cutoff_; }
  int phys_points() const noexcept { return points_; }
  int modes_per_axis() const noexcept { return 2 * cutoff_ + 1; }
  std::size_t num_modes() const noexcept;
  std::size_t num_points() const noexcept;

  /// Flat coefficient index; k1 outer, k2 inner, each in [-N, N].
  std::size_t index(int k1, int k2 = 0) const noexcept;
  std::size_t zero_index() const noexcept { return index(0, 0); }
  Mode mode(std::size_t idx) const noexcept;
  std::size_t conjugate_index(std::size_t idx) const noexcept { return num_modes() - 1 - idx; }

  /// Integer |k|_2^2 of a flat index.
  int norm_sq(std::size_t idx) const noexcept;
  const std::vector<int>& norm_sq_table() const noexcept;

  /// True iff three-factor products are exact on the band (M >= 4N+1).
  bool cubic_exact() const noexcept { return points_ >= 4 * cutoff_ + 1; }

  bool operator==(const TorusGrid& o) const noexcept {
    return dim_ == o.dim_ && cutoff_ == o.cutoff_ && points_ == o.points_;
  }
  bool operator!=(const TorusGrid& o) const noexcept { return !(*this == o); }

  const detail::GridTables& tables() const noexcept { return *tables_; }

 private:
  int dim_;
  int cutoff_;
  int points_;
  std::shared_ptr<const detail::GridTables> tables_;
};

class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid);
  /// Takes ownership of a full coefficient array; it must be Hermitian.
  SpectralField(TorusGrid grid, std::vector<Complex> coeffs);

  static SpectralField constant(const TorusGrid& grid, double value);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  Complex coeff(int k1, int k2 = 0) const noexcept { return coeffs_[grid_.index(k1, k2)]; }
  /// Sets f_k and f_{-k} = conj(f_k) together.
  void set_mode(int k1, int k2, Complex value) noexcept;
  void set_mode(int k1, Complex value) noexcept { set_mode(k1, 0, value); }

  double mean() const noexcept { return coeffs_[grid_.zero_index()].real(); }

  bool is_hermitian(double tol = 0.0) const noexcept;
  bool all_finite() const noexcept;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s) noexcept;
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

 private:
  TorusGrid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Throws ErrorCode::grid_mismatch unless the grids agree.
void check_same_grid(const TorusGrid& a, const TorusGrid& b);

/// Grid values f(x_j), x_j = j/M, row-major with x1 outer.
std::vector<double> to_physical(const SpectralField& field);
void to_physical(const SpectralField& field, std::span<double> out);

/// Forward transform followed by truncation to |k|_inf <= N. The result is
/// exactly Hermitian.
SpectralField to_spectral(const TorusGrid& grid, std::span<const double> values);

/// exp(-(m + 4 pi^2 |k|^2) t) applied per mode; m = 0 is the heat semigroup.
SpectralField heat_semigroup(const SpectralField& field, double t, double mass = 0.0);

/// Pointwise product on the padded grid, truncated to the band.
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b,
                                const SpectralField& c);

/// sqrt(M^-d sum_x f(x)^2); equals the L2 norm on [0,1)^d.
double l2_norm(const SpectralField& field);
double sup_norm(const SpectralField& field);

/// L2 inner product and norm evaluated on coefficients (Parseval).
double l2_inner(const SpectralField& a, const SpectralField& b);
double l2_norm_spectral(const SpectralField& field);

/// Independent complex Gaussian coefficients with E|f_k|^2 = variance(|k|^2),
/// Hermitian-paired; the zero mode is real with variance variance(0).
SpectralField gaussian_field(const TorusGrid& grid, const NoiseKey& key,
                             const std::function<double(int)>& variance);

/// Truncated massive Gaussian free field N(0, (1 - Laplacian)^-1).
SpectralField sample_gff(const TorusGrid& grid, std::uint64_t seed, std::uint32_t trajectory = 0);

/// Re-expresses a field on another grid: modes common to both are copied,
/// others are zero.
SpectralField resample(const SpectralField& field, const TorusGrid& target);

}  // namespace phi4
