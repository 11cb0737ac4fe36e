#pragma once

#include <array>
#include <cstdint>

namespace snlw {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block of
/// four 32-bit words is a pure function of (counter, key), which lets every
/// noise increment be addressed directly by (seed, mode, step).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

/// Key derived from a 64-bit seed.
constexpr Philox4x32::Key philox_key(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Uniform in the open interval (0, 1) from 64 random bits.
double open_uniform(std::uint64_t bits);

/// Two independent standard normals from one Philox block (Box-Muller).
std::array<double, 2> normal_pair(const Philox4x32::Counter& block);

}  // namespace snlw
