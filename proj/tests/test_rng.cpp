#include <doctest.h>

#include <cmath>

#include "phi4/rng.hpp"

using namespace phi4;

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms stay inside the open interval") {
  CHECK(uniform_open(0, 0) > 0.0);
  CHECK(uniform_open(0xffffffff, 0xffffffff) < 1.0);
}

TEST_CASE("draws depend only on the address") {
  const NoiseKey a{42, 3, 17, StreamTag::ou_increment};
  CHECK(gaussian_pair(a, 2, -1) == gaussian_pair(a, 2, -1));
  NoiseKey b = a;
  b.tag = StreamTag::gff;
  CHECK(gaussian_pair(a, 2, -1) != gaussian_pair(b, 2, -1));
  b = a;
  b.step = a.step + (std::uint64_t{1} << 32);
  CHECK(gaussian_pair(a, 2, -1) != gaussian_pair(b, 2, -1));
  CHECK(gaussian_pair(a, 2, -1) != gaussian_pair(a, -1, 2));
}

TEST_CASE("gaussian moments") {
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0, cross = 0;
  for (int i = 0; i < n; ++i) {
    const auto z = gaussian_pair(NoiseKey{7, 0, static_cast<std::uint64_t>(i), StreamTag::auxiliary}, 1, 0);
    s1 += z[0] + z[1];
    s2 += z[0] * z[0] + z[1] * z[1];
    s4 += std::pow(z[0], 4) + std::pow(z[1], 4);
    cross += z[0] * z[1];
  }
  const double m = 2.0 * n;
  CHECK(std::abs(s1 / m) < 4.0 / std::sqrt(m));
  CHECK(std::abs(s2 / m - 1.0) < 4.0 * std::sqrt(2.0 / m));
  CHECK(std::abs(s4 / m - 3.0) < 4.0 * std::sqrt(96.0 / m));
  CHECK(std::abs(cross / n) < 4.0 / std::sqrt(double(n)));
}
