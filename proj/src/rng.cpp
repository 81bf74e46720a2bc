#include "phi4/rng.hpp"

#include <cmath>
#include <numbers>

namespace phi4 {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

double uniform_open(std::uint32_t hi, std::uint32_t lo) noexcept {
  // 52 bits plus half an ulp: the largest value is 1 - 2^-53, exactly representable.
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

std::array<double, 2> gaussian_pair(const NoiseKey& key, int k1, int k2) noexcept {
  const auto mode = (static_cast<std::uint32_t>(k1 & 0xffff) << 16) |
                    static_cast<std::uint32_t>(k2 & 0xffff);
  const auto tag = static_cast<std::uint32_t>(key.tag) & 0xffu;
  const std::array<std::uint32_t, 4> counter = {
      mode,
      static_cast<std::uint32_t>(key.step),
      key.trajectory,
      (tag << 24) | static_cast<std::uint32_t>((key.step >> 32) & 0xffffffu),
  };
  const std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key.seed),
                                          static_cast<std::uint32_t>(key.seed >> 32)};
  const auto r = philox4x32(counter, k);
  const double u1 = uniform_open(r[0], r[1]);
  const double u2 = uniform_open(r[2], r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace phi4
