#include "phi4/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "phi4/error.hpp"

namespace phi4 {

namespace detail {

// FFTW plans are created once per (dim, M) under a lock and executed with the
// new-array interface, which is thread-safe.
struct FftPlans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

struct GridTables {
  std::vector<int> norm_sq;
  FftPlans plans;
  std::size_t half_len = 0;  // complex length of the r2c output
};

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

FftPlans make_plans(int dim, int m) {
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const std::size_t real_len = dim == 1 ? m : static_cast<std::size_t>(m) * m;
  const std::size_t half_len = dim == 1 ? m / 2 + 1 : static_cast<std::size_t>(m) * (m / 2 + 1);
  double* r = fftw_alloc_real(real_len);
  fftw_complex* c = fftw_alloc_complex(half_len);
  FftPlans p;
  if (dim == 1) {
    p.r2c = fftw_plan_dft_r2c_1d(m, r, c, flags);
    p.c2r = fftw_plan_dft_c2r_1d(m, c, r, flags);
  } else {
    p.r2c = fftw_plan_dft_r2c_2d(m, m, r, c, flags);
    p.c2r = fftw_plan_dft_c2r_2d(m, m, c, r, flags);
  }
  fftw_free(r);
  fftw_free(c);
  if (!p.r2c || !p.c2r) fail(ErrorCode::internal, "FFTW planning failed");
  return p;
}

std::shared_ptr<const GridTables> tables_for(int dim, int cutoff, int m) {
  struct Key {
    int dim, cutoff, m;
    bool operator<(const Key& o) const {
      return std::tie(dim, cutoff, m) < std::tie(o.dim, o.cutoff, o.m);
    }
  };
  static std::map<Key, std::shared_ptr<const GridTables>> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find({dim, cutoff, m});
  if (it != cache.end()) return it->second;

  auto t = std::make_shared<GridTables>();
  const int side = 2 * cutoff + 1;
  if (dim == 1) {
    t->norm_sq.resize(side);
    for (int k = -cutoff; k <= cutoff; ++k) t->norm_sq[k + cutoff] = k * k;
    t->half_len = m / 2 + 1;
  } else {
    t->norm_sq.resize(static_cast<std::size_t>(side) * side);
    for (int k1 = -cutoff; k1 <= cutoff; ++k1)
      for (int k2 = -cutoff; k2 <= cutoff; ++k2)
        t->norm_sq[(k1 + cutoff) * side + (k2 + cutoff)] = k1 * k1 + k2 * k2;
    t->half_len = static_cast<std::size_t>(m) * (m / 2 + 1);
  }
  t->plans = make_plans(dim, m);
  cache.emplace(Key{dim, cutoff, m}, t);
  return t;
}

// Per-thread scratch for the half-complex spectrum.
std::vector<Complex>& spectrum_scratch(std::size_t n) {
  thread_local std::vector<Complex> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// TorusGrid

int TorusGrid::default_points(int cutoff) noexcept {
  int m = 4 * cutoff + 1;
  return m % 2 == 0 ? m : m + 1;
}

TorusGrid::TorusGrid(int dim, int cutoff, int phys_points)
    : dim_(dim), cutoff_(cutoff), points_(phys_points == 0 ? default_points(cutoff) : phys_points) {
  if (dim != 1 && dim != 2) fail(ErrorCode::invalid_argument, "grid dimension must be 1 or 2");
  if (cutoff < 1 || cutoff > 4096) fail(ErrorCode::invalid_argument, "cutoff N must be in [1, 4096]");
  if (points_ < 3 * cutoff + 1)
    fail(ErrorCode::invalid_argument, "physical points M must satisfy M >= 3N+1");
  if (points_ % 2 != 0) fail(ErrorCode::invalid_argument, "physical points M must be even");
  tables_ = detail::tables_for(dim_, cutoff_, points_);
}

std::size_t TorusGrid::num_modes() const noexcept {
  const std::size_t s = modes_per_axis();
  return dim_ == 1 ? s : s * s;
}

std::size_t TorusGrid::num_points() const noexcept {
  const std::size_t m = points_;
  return dim_ == 1 ? m : m * m;
}

std::size_t TorusGrid::index(int k1, int k2) const noexcept {
  if (dim_ == 1) return static_cast<std::size_t>(k1 + cutoff_);
  return static_cast<std::size_t>(k1 + cutoff_) * modes_per_axis() + (k2 + cutoff_);
}

Mode TorusGrid::mode(std::size_t idx) const noexcept {
  if (dim_ == 1) return {static_cast<int>(idx) - cutoff_, 0};
  const int s = modes_per_axis();
  return {static_cast<int>(idx) / s - cutoff_, static_cast<int>(idx) % s - cutoff_};
}

int TorusGrid::norm_sq(std::size_t idx) const noexcept { return tables_->norm_sq[idx]; }

const std::vector<int>& TorusGrid::norm_sq_table() const noexcept { return tables_->norm_sq; }

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(TorusGrid grid) : grid_(std::move(grid)), coeffs_(grid_.num_modes()) {}

SpectralField::SpectralField(TorusGrid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.num_modes())
    fail(ErrorCode::invalid_argument, "coefficient array does not match the grid");
  if (!is_hermitian(1e-12 * (1.0 + l2_norm_spectral(*this))))
    fail(ErrorCode::invalid_argument, "coefficients are not Hermitian (field not real)");
}

SpectralField SpectralField::constant(const TorusGrid& grid, double value) {
  SpectralField f(grid);
  f.coeffs_[grid.zero_index()] = value;
  return f;
}

void SpectralField::set_mode(int k1, int k2, Complex value) noexcept {
  const auto i = grid_.index(k1, k2);
  const auto j = grid_.conjugate_index(i);
  if (i == j) {
    coeffs_[i] = value.real();
  } else {
    coeffs_[i] = value;
    coeffs_[j] = std::conj(value);
  }
}

bool SpectralField::is_hermitian(double tol) const noexcept {
  const std::size_t n = coeffs_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(coeffs_[i] - std::conj(coeffs_[n - 1 - i])) > tol) return false;
  return true;
}

bool SpectralField::all_finite() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) noexcept {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

void check_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (a != b)
    fail(ErrorCode::grid_mismatch,
         "grid mismatch: (d=" + std::to_string(a.dim()) + ", N=" + std::to_string(a.cutoff()) +
             ", M=" + std::to_string(a.phys_points()) + ") vs (d=" + std::to_string(b.dim()) +
             ", N=" + std::to_string(b.cutoff()) + ", M=" + std::to_string(b.phys_points()) + ")");
}

// ---------------------------------------------------------------------------
// Transforms

void to_physical(const SpectralField& field, std::span<double> out) {
  const TorusGrid& g = field.grid();
  if (out.size() != g.num_points()) fail(ErrorCode::invalid_argument, "output buffer size mismatch");
  const auto& t = g.tables();
  auto& spec = detail::spectrum_scratch(t.half_len);
  std::fill(spec.begin(), spec.begin() + static_cast<std::ptrdiff_t>(t.half_len), Complex{});
  const int n = g.cutoff();
  const int m = g.phys_points();
  const auto c = field.coeffs();
  if (g.dim() == 1) {
    for (int k = 0; k <= n; ++k) spec[k] = c[g.index(k)];
  } else {
    const int h = m / 2 + 1;
    for (int k1 = -n; k1 <= n; ++k1) {
      const int row = (k1 + m) % m;
      for (int k2 = 0; k2 <= n; ++k2) spec[static_cast<std::size_t>(row) * h + k2] = c[g.index(k1, k2)];
    }
  }
  fftw_execute_dft_c2r(t.plans.c2r, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
}

std::vector<double> to_physical(const SpectralField& field) {
  std::vector<double> out(field.grid().num_points());
  to_physical(field, out);
  return out;
}

SpectralField to_spectral(const TorusGrid& g, std::span<const double> values) {
  if (values.size() != g.num_points()) fail(ErrorCode::invalid_argument, "input buffer size mismatch");
  const auto& t = g.tables();
  auto& spec = detail::spectrum_scratch(t.half_len);
  // r2c preserves its input.
  fftw_execute_dft_r2c(t.plans.r2c, const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(spec.data()));
  const double scale = 1.0 / static_cast<double>(g.num_points());
  const int n = g.cutoff();
  const int m = g.phys_points();
  SpectralField f(g);
  auto c = f.coeffs();
  if (g.dim() == 1) {
    c[g.index(0)] = spec[0].real() * scale;
    for (int k = 1; k <= n; ++k) {
      const Complex v = spec[k] * scale;
      c[g.index(k)] = v;
      c[g.index(-k)] = std::conj(v);
    }
  } else {
    const int h = m / 2 + 1;
    // Canonical half-plane: k2 > 0, or k2 == 0 and k1 >= 0; the rest by symmetry.
    for (int k1 = -n; k1 <= n; ++k1) {
      const int row = (k1 + m) % m;
      for (int k2 = 0; k2 <= n; ++k2) {
        if (k2 == 0 && k1 < 0) continue;
        const Complex v = spec[static_cast<std::size_t>(row) * h + k2] * scale;
        const auto i = g.index(k1, k2);
        if (k1 == 0 && k2 == 0) {
          c[i] = v.real();
        } else {
          c[i] = v;
          c[g.conjugate_index(i)] = std::conj(v);
        }
      }
    }
  }
  return f;
}

SpectralField heat_semigroup(const SpectralField& field, double t, double mass) {
  if (!(t >= 0.0)) fail(ErrorCode::invalid_argument, "heat semigroup requires t >= 0");
  if (!(mass >= 0.0)) fail(ErrorCode::invalid_argument, "heat semigroup requires mass >= 0");
  SpectralField out = field;
  const auto& nsq = field.grid().norm_sq_table();
  const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-(mass + four_pi_sq * nsq[i]) * t);
  return out;
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
  check_same_grid(a.grid(), b.grid());
  auto x = to_physical(a);
  const auto y = to_physical(b);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= y[i];
  return to_spectral(a.grid(), x);
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b,
                                const SpectralField& c) {
  check_same_grid(a.grid(), b.grid());
  check_same_grid(a.grid(), c.grid());
  if (!a.grid().cubic_exact())
    fail(ErrorCode::invalid_argument, "three-factor products need M >= 4N+1 to be alias-free");
  auto x = to_physical(a);
  const auto y = to_physical(b);
  const auto z = to_physical(c);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= y[i] * z[i];
  return to_spectral(a.grid(), x);
}

double l2_norm(const SpectralField& field) {
  const auto x = to_physical(field);
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

double sup_norm(const SpectralField& field) {
  const auto x = to_physical(field);
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

double l2_inner(const SpectralField& a, const SpectralField& b) {
  check_same_grid(a.grid(), b.grid());
  const auto x = a.coeffs();
  const auto y = b.coeffs();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
  return s;
}

double l2_norm_spectral(const SpectralField& field) {
  double s = 0.0;
  for (const auto& c : field.coeffs()) s += std::norm(c);
  return std::sqrt(s);
}

SpectralField gaussian_field(const TorusGrid& g, const NoiseKey& key,
                             const std::function<double(int)>& variance) {
  SpectralField f(g);
  auto c = f.coeffs();
  const std::size_t zero = g.zero_index();
  for (std::size_t i = zero; i < c.size(); ++i) {
    const Mode k = g.mode(i);
    const double var = variance(g.norm_sq(i));
    const auto z = gaussian_pair(key, k.k1, k.k2);
    if (i == zero) {
      c[i] = std::sqrt(var) * z[0];
    } else {
      const double s = std::sqrt(0.5 * var);
      c[i] = Complex(s * z[0], s * z[1]);
      c[g.conjugate_index(i)] = std::conj(c[i]);
    }
  }
  return f;
}

SpectralField sample_gff(const TorusGrid& grid, std::uint64_t seed, std::uint32_t trajectory) {
  const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
  return gaussian_field(grid, NoiseKey{seed, trajectory, 0, StreamTag::gff},
                        [&](int nsq) { return 1.0 / (1.0 + four_pi_sq * nsq); });
}

SpectralField resample(const SpectralField& field, const TorusGrid& target) {
  if (field.grid().dim() != target.dim()) fail(ErrorCode::grid_mismatch, "resample across dimensions");
  SpectralField out(target);
  const int n = std::min(field.grid().cutoff(), target.cutoff());
  auto c = out.coeffs();
  if (target.dim() == 1) {
    for (int k = -n; k <= n; ++k) c[target.index(k)] = field.coeff(k);
  } else {
    for (int k1 = -n; k1 <= n; ++k1)
      for (int k2 = -n; k2 <= n; ++k2) c[target.index(k1, k2)] = field.coeff(k1, k2);
  }
  return out;
}

}  // namespace phi4
