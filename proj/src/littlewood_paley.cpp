#include "phi4/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>

#include "phi4/error.hpp"

namespace phi4 {

int block_of(int norm_sq) noexcept {
  if (norm_sq == 0) return -1;
  // 4^(j-1) <= |k|^2 < 4^j
  int j = 1;
  long long upper = 4;
  while (norm_sq >= upper) {
    upper *= 4;
    ++j;
  }
  return j;
}

int max_block(const TorusGrid& grid) noexcept {
  const int n = grid.cutoff();
  return block_of(grid.dim() * n * n);
}

namespace {

// Zero out every mode whose block is not selected by `keep`.
template <class Pred>
SpectralField filter_blocks(const SpectralField& f, Pred keep) {
  SpectralField out = f;
  const auto& nsq = f.grid().norm_sq_table();
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!keep(block_of(nsq[i]))) c[i] = 0.0;
  return out;
}

// Physical values of every block, indexed by j + 1.
std::vector<std::vector<double>> physical_blocks(const SpectralField& f) {
  const int top = max_block(f.grid());
  std::vector<std::vector<double>> out;
  out.reserve(top + 2);
  for (int j = -1; j <= top; ++j) out.push_back(to_physical(block(f, j)));
  return out;
}

}  // namespace

SpectralField block(const SpectralField& f, int j) {
  if (j < -1 || j > max_block(f.grid())) fail(ErrorCode::invalid_argument, "block index out of range");
  return filter_blocks(f, [j](int b) { return b == j; });
}

std::vector<double> block_sup_norms(const SpectralField& f) {
  const int top = max_block(f.grid());
  std::vector<double> out;
  out.reserve(top + 2);
  for (int j = -1; j <= top; ++j) {
    const auto x = to_physical(block(f, j));
    double s = 0.0;
    for (double v : x) s = std::max(s, std::abs(v));
    out.push_back(s);
  }
  return out;
}

double besov_norm(const SpectralField& f, double beta) {
  const auto sups = block_sup_norms(f);
  double best = 0.0;
  for (std::size_t i = 0; i < sups.size(); ++i) {
    const int j = static_cast<int>(i) - 1;
    best = std::max(best, std::exp2(beta * j) * sups[i]);
  }
  return best;
}

SpectralField paraproduct_less(const SpectralField& u, const SpectralField& v) {
  check_same_grid(u.grid(), v.grid());
  const auto bu = physical_blocks(u);
  const auto bv = physical_blocks(v);
  const std::size_t npts = u.grid().num_points();
  std::vector<double> low(npts, 0.0);  // Delta_{<=j-2} u
  std::vector<double> acc(npts, 0.0);
  const int top = max_block(u.grid());
  for (int j = 1; j <= top; ++j) {
    const auto& add = bu[j - 2 + 1];
    for (std::size_t x = 0; x < npts; ++x) low[x] += add[x];
    const auto& vj = bv[j + 1];
    for (std::size_t x = 0; x < npts; ++x) acc[x] += low[x] * vj[x];
  }
  return to_spectral(u.grid(), acc);
}

SpectralField resonant(const SpectralField& u, const SpectralField& v) {
  check_same_grid(u.grid(), v.grid());
  const auto bu = physical_blocks(u);
  const auto bv = physical_blocks(v);
  const std::size_t npts = u.grid().num_points();
  const int nb = static_cast<int>(bu.size());
  std::vector<double> acc(npts, 0.0);
  for (int i = 0; i < nb; ++i) {
    for (int j = std::max(0, i - 1); j <= std::min(nb - 1, i + 1); ++j) {
      const auto& a = bu[i];
      const auto& b = bv[j];
      for (std::size_t x = 0; x < npts; ++x) acc[x] += a[x] * b[x];
    }
  }
  return to_spectral(u.grid(), acc);
}

SpectralField para_or_res(const SpectralField& u, const SpectralField& v) {
  return paraproduct_less(u, v) + resonant(u, v);
}

SpectralField project_low(const SpectralField& f, int n) {
  if (n < -1) fail(ErrorCode::invalid_argument, "projection index must be >= -1");
  return filter_blocks(f, [n](int b) { return b <= n; });
}

SpectralField project_high(const SpectralField& f, int n) {
  if (n < -1) fail(ErrorCode::invalid_argument, "projection index must be >= -1");
  return filter_blocks(f, [n](int b) { return b > n; });
}

}  // namespace phi4
