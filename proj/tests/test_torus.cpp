#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "phi4/error.hpp"
#include "phi4/torus.hpp"

using namespace phi4;

TEST_CASE("grid padding") {
  CHECK(TorusGrid(2, 8).phys_points() == 34);
  CHECK(TorusGrid(1, 16).phys_points() == 66);
  CHECK(TorusGrid(2, 8).cubic_exact());
  CHECK_FALSE(TorusGrid(2, 8, 26).cubic_exact());
  CHECK_THROWS_AS(TorusGrid(2, 8, 24), Error);  // below 3N+1
  CHECK_THROWS_AS(TorusGrid(2, 8, 27), Error);  // odd
  CHECK_THROWS_AS(TorusGrid(3, 8), Error);
  CHECK_THROWS_AS(TorusGrid(2, 0), Error);
}

TEST_CASE("index layout and conjugates") {
  const TorusGrid g(2, 3);
  CHECK(g.num_modes() == 49);
  CHECK(g.index(-3, -3) == 0);
  CHECK(g.index(-3, -2) == 1);
  for (std::size_t i = 0; i < g.num_modes(); ++i) {
    const Mode k = g.mode(i);
    const Mode c = g.mode(g.conjugate_index(i));
    CHECK(c.k1 == -k.k1);
    CHECK(c.k2 == -k.k2);
    CHECK(g.norm_sq(i) == k.k1 * k.k1 + k.k2 * k.k2);
  }
}

TEST_CASE("zero mode and single cosine") {
  const TorusGrid g(2, 4);
  const auto c = to_physical(SpectralField::constant(g, 2.5));
  for (double x : c) CHECK(x == doctest::Approx(2.5).epsilon(1e-15));

  SpectralField f(g);
  f.set_mode(1, 0, 0.5);
  const auto v = to_physical(f);
  const int m = g.phys_points();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      CHECK(std::abs(v[i * m + j] - std::cos(2 * std::numbers::pi * i / m)) < 1e-14);
}

TEST_CASE("round trip and Parseval on random fields") {
  for (int dim : {1, 2})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const TorusGrid g(dim, 9);
      const SpectralField f = oracle::random_field(g, seed);
      CHECK(f.is_hermitian());
      const SpectralField back = to_spectral(g, to_physical(f));
      CHECK(l2_norm_spectral(back - f) <= 1e-12 * l2_norm_spectral(f));
      CHECK(back.is_hermitian());
      CHECK(std::abs(l2_norm(f) - l2_norm_spectral(f)) <= 1e-12 * l2_norm_spectral(f));
    }
}

TEST_CASE("norm examples") {
  const TorusGrid g(2, 4);
  const SpectralField three = SpectralField::constant(g, 3.0);
  CHECK(l2_norm(three) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(sup_norm(three) == doctest::Approx(3.0).epsilon(1e-15));
  SpectralField c(g);
  c.set_mode(1, 0, 0.5);
  CHECK(l2_norm(c) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("heat semigroup") {
  const TorusGrid g(2, 6);
  const SpectralField k = SpectralField::constant(g, 1.7);
  CHECK(l2_norm_spectral(heat_semigroup(k, 3.0) - k) == 0.0);

  SpectralField e(g);
  e.set_mode(1, 0, 1.0);
  CHECK(heat_semigroup(e, 1.0).coeff(1, 0).real() == doctest::Approx(std::exp(-oracle::kFourPiSq)).epsilon(1e-14));
  CHECK_THROWS_AS(heat_semigroup(e, -0.1), Error);

  const SpectralField f = oracle::random_field(g, 3);
  for (double m : {0.0, 1.0})
    for (double t : {0.0, 1e-3, 0.1, 1.0}) {
      const auto a = heat_semigroup(heat_semigroup(f, t, m), 0.3, m);
      const auto b = heat_semigroup(f, t + 0.3, m);
      CHECK(l2_norm_spectral(a - b) <= 1e-15 * l2_norm_spectral(f));
      CHECK(l2_norm(heat_semigroup(f, t, m)) <= l2_norm(f) * (1 + 1e-15));
    }
}

TEST_CASE("dealiased products") {
  const TorusGrid g(2, 4);
  const auto six = dealiased_product(SpectralField::constant(g, 2.0), SpectralField::constant(g, 3.0));
  CHECK(six.mean() == doctest::Approx(6.0).epsilon(1e-15));

  SpectralField c(g);
  c.set_mode(1, 0, 0.5);
  const auto sq = dealiased_product(c, c);
  CHECK(sq.mean() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(sq.coeff(2, 0) - Complex(0.25, 0)) < 1e-15);

  const TorusGrid g1(1, 1);
  SpectralField c1(g1);
  c1.set_mode(1, 0.5);
  CHECK(dealiased_product(c1, c1).size() == 3);  // second harmonic dropped at N = 1

  for (std::uint64_t s = 1; s <= 4; ++s) {
    const auto a = oracle::random_field(g, s);
    const auto b = oracle::random_field(g, s + 10);
    const auto w = oracle::random_field(g, s + 20);
    const auto ab = dealiased_product(a, b);
    CHECK(l2_norm_spectral(ab - oracle::convolve(a, b)) <= 1e-13 * l2_norm_spectral(ab));
    CHECK(l2_norm_spectral(ab - dealiased_product(b, a)) <= 1e-15 * l2_norm_spectral(ab));
    const auto lin = dealiased_product(2.0 * a + w, b);
    CHECK(l2_norm_spectral(lin - (2.0 * ab + dealiased_product(w, b))) <= 1e-13 * l2_norm_spectral(lin));
    const auto abw = dealiased_product(a, b, w);
    CHECK(l2_norm_spectral(abw - oracle::convolve(oracle::convolve(a, b), w)) > 0.0);  // truncating twice differs
  }
  CHECK_THROWS_AS(dealiased_product(SpectralField(g), SpectralField(TorusGrid(2, 5))), Error);
  const TorusGrid tight(2, 4, 14);
  CHECK_THROWS_AS(dealiased_product(SpectralField(tight), SpectralField(tight), SpectralField(tight)), Error);
}

TEST_CASE("three-factor product equals the full convolution") {
  // Reference keeps the untruncated 4N band of a*b before the second product.
  const TorusGrid g(2, 3);
  const TorusGrid wide(2, 6);
  const auto a = oracle::random_field(g, 5), b = oracle::random_field(g, 6), w = oracle::random_field(g, 7);
  const auto ab = oracle::convolve(resample(a, wide), resample(b, wide));
  const auto ref = resample(oracle::convolve(ab, resample(w, wide)), g);
  const auto got = dealiased_product(a, b, w);
  CHECK(l2_norm_spectral(got - ref) <= 1e-13 * l2_norm_spectral(ref));
}

TEST_CASE("massive GFF per-mode variances") {
  const TorusGrid g(2, 8);
  const int n = 10000;
  std::vector<double> s0(g.num_modes()), s1(g.num_modes());
  for (int i = 0; i < n; ++i) {
    const auto f = sample_gff(g, 11, static_cast<std::uint32_t>(i));
    for (std::size_t k = 0; k < g.num_modes(); ++k) {
      const double v = std::norm(f.coeffs()[k]);
      s0[k] += v;
      s1[k] += v * v;
    }
  }
  int bad = 0;
  for (std::size_t k = 0; k < g.num_modes(); ++k) {
    const double target = 1.0 / (1.0 + oracle::kFourPiSq * g.norm_sq(k));
    const double mean = s0[k] / n;
    const double se = std::sqrt((s1[k] / n - mean * mean) / (n - 1));
    if (std::abs(mean - target) > 4 * se) ++bad;
  }
  // 289 modes at 4 SE: more than two outliers would be very unlikely.
  CHECK(bad <= 2);
  const auto f = sample_gff(g, 11);
  CHECK(f.coeff(0, 0).imag() == 0.0);
  CHECK(f.is_hermitian());
}

TEST_CASE("smoothing ratio stays bounded") {
  // t^(delta/2) ||P_t f||_{beta+delta} / ||f||_beta over dyadic t; the bound is recorded, not prescribed.
  const TorusGrid g(2, 16);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto f = oracle::random_field(g, 500 + s);
    const double base = l2_norm(f);
    for (int j = 1; j <= 12; ++j) {
      const double t = std::ldexp(1.0, -j);
      worst = std::max(worst, std::sqrt(t) * l2_norm_spectral(heat_semigroup(f, t)) / base);
    }
  }
  CHECK(worst <= 1.0);
}

TEST_CASE("resample keeps shared modes") {
  const TorusGrid a(2, 4), b(2, 7);
  const auto f = oracle::random_field(a, 9);
  const auto up = resample(f, b);
  CHECK(l2_norm_spectral(resample(up, a) - f) == 0.0);
  CHECK(l2_norm_spectral(up) == doctest::Approx(l2_norm_spectral(f)).epsilon(1e-15));
}
