#pragma once

#include <array>
#include <cstdint>

namespace phi4 {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Pure function
/// of (counter, key); no state is carried between draws.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Separates independent uses of the same seed.
enum class StreamTag : std::uint32_t {
  ou_increment = 1,
  stationary_init = 2,
  gff = 3,
  power_iteration = 4,
  auxiliary = 5,
};

/// Addresses one draw: (seed, trajectory, step, tag) plus the Fourier mode
/// supplied at draw time. Identical addresses give identical draws regardless
/// of evaluation order or thread.
struct NoiseKey {
  std::uint64_t seed = 0;
  std::uint32_t trajectory = 0;
  std::uint64_t step = 0;  // only the low 56 bits are used
  StreamTag tag = StreamTag::ou_increment;
};

/// Two independent standard normals for mode (k1, k2) under `key`
/// (Box-Muller on 52-bit uniforms).
std::array<double, 2> gaussian_pair(const NoiseKey& key, int k1, int k2) noexcept;

/// Uniform double in (0, 1) built from two 32-bit words.
double uniform_open(std::uint32_t hi, std::uint32_t lo) noexcept;

}  // namespace phi4
