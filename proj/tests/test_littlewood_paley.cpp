#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "phi4/error.hpp"
#include "phi4/littlewood_paley.hpp"

using namespace phi4;

TEST_CASE("block membership") {
  CHECK(block_of(0) == -1);
  CHECK(block_of(1) == 1);
  CHECK(block_of(2) == 1);
  CHECK(block_of(3) == 1);
  CHECK(block_of(4) == 2);
  CHECK(block_of(15) == 2);
  CHECK(block_of(16) == 3);
  for (int nsq = 1; nsq < 5000; ++nsq) {
    const int j = block_of(nsq);
    const double r = std::sqrt(static_cast<double>(nsq));
    CHECK(std::ldexp(1.0, j - 1) <= r);
    CHECK(r < std::ldexp(1.0, j));
  }
  CHECK(max_block(TorusGrid(1, 8)) == 4);
  CHECK(max_block(TorusGrid(2, 8)) == 4);   // sqrt(2) 8 = 11.3 < 16
  CHECK(max_block(TorusGrid(2, 16)) == 5);
  CHECK(max_block(TorusGrid(1, 16)) == 5);
}

TEST_CASE("blocks partition the band") {
  const TorusGrid g(2, 12);
  const auto f = oracle::random_field(g, 1);
  SpectralField sum(g);
  for (int j = -1; j <= max_block(g); ++j) sum += block(f, j);
  CHECK(l2_norm_spectral(sum - f) == 0.0);
  CHECK(l2_norm_spectral(block(f, 0)) == 0.0);
  CHECK_THROWS_AS(block(f, max_block(g) + 1), Error);
  CHECK_THROWS_AS(block(f, -2), Error);
  for (int n = -1; n <= max_block(g); ++n)
    CHECK(l2_norm_spectral(project_low(f, n) + project_high(f, n) - f) == 0.0);
  CHECK(l2_norm_spectral(project_high(f, max_block(g))) == 0.0);
  CHECK(l2_norm_spectral(project_low(f, -1) - SpectralField::constant(g, f.mean())) == 0.0);
}

TEST_CASE("Besov examples") {
  const TorusGrid g(2, 8);
  CHECK(besov_norm(SpectralField::constant(g, 3.0), -0.1) == doctest::Approx(3.0 * std::pow(2.0, 0.1)).epsilon(1e-14));
  SpectralField c(g);
  c.set_mode(1, 0, 0.5);
  CHECK(besov_norm(c, 0.7) == doctest::Approx(std::pow(2.0, 0.7)).epsilon(1e-13));
  SpectralField h(g);
  h.set_mode(4, 0, 0.5);
  CHECK(besov_norm(h, -0.5) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-13));
  const auto f = oracle::random_field(g, 4);
  for (double lam : {-2.0, 0.5, 3.0})
    CHECK(besov_norm(lam * f, 0.3) == doctest::Approx(std::abs(lam) * besov_norm(f, 0.3)).epsilon(1e-14));
  const auto sups = block_sup_norms(f);
  CHECK(sups.size() == static_cast<std::size_t>(max_block(g) + 2));
  CHECK(sups[1] == 0.0);
}

TEST_CASE("paraproduct examples") {
  const TorusGrid g(2, 8);
  const auto f = oracle::random_field(g, 2);
  const auto one = SpectralField::constant(g, 1.0);
  // A constant sits in block -1, so it only acts as the low factor.
  const auto lowc = paraproduct_less(one, f);
  CHECK(l2_norm_spectral(lowc - project_high(f, 0)) <= 1e-14 * l2_norm_spectral(f));
  CHECK(l2_norm_spectral(paraproduct_less(f, one)) == 0.0);
  // Two modes in far apart blocks: the low one times the high one is pure paraproduct.
  SpectralField lo(g), hi(g);
  lo.set_mode(1, 0, 0.5);
  hi.set_mode(0, 7, 0.5);
  CHECK(l2_norm_spectral(paraproduct_less(lo, hi) - dealiased_product(lo, hi)) <= 1e-15);
  CHECK(l2_norm_spectral(resonant(lo, hi)) == 0.0);
}

TEST_CASE("Bony decomposition reproduces the product") {
  const TorusGrid g(2, 16);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto f = oracle::random_field(g, 100 + s);
    const auto h = oracle::random_field(g, 200 + s);
    const auto fh = dealiased_product(f, h);
    const auto bony = paraproduct_less(f, h) + paraproduct_less(h, f) + resonant(f, h);
    worst = std::max(worst, l2_norm(bony - fh) / l2_norm(fh));
    CHECK(l2_norm_spectral(para_or_res(f, h) - paraproduct_less(f, h) - resonant(f, h)) <= 1e-14 * l2_norm_spectral(fh));
    CHECK(l2_norm_spectral(resonant(f, h) - resonant(h, f)) <= 1e-14 * l2_norm_spectral(fh));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("paraproduct and high-projection constants are bounded") {
  // Ratios observed over random samples; bounds are generous constants.
  const TorusGrid g(2, 16);
  double para = 0.0, tail = 0.0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto f = oracle::random_field(g, 300 + s, 5.0);
    const auto h = oracle::random_field(g, 400 + s);
    para = std::max(para, besov_norm(paraproduct_less(f, h), -0.5) / (sup_norm(f) * besov_norm(h, -0.5)));
    for (int n = 0; n < max_block(g); ++n)
      tail = std::max(tail, std::ldexp(1.0, n) * besov_norm(project_high(h, n), -0.5) / besov_norm(h, 0.5));
  }
  MESSAGE("paraproduct ratio " << para << ", high-projection ratio " << tail);
  CHECK(para < 50.0);
  CHECK(tail <= 1.0 + 1e-12);
}
