#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace stpis {

/// xoshiro256** seeded through splitmix64. Bit-exact across platforms for a
/// given seed; the algorithm id is written into every experiment manifest.
///
/// Single-owner: parallel runs must each hold their own instance.
class SeededRng {
 public:
  static constexpr std::string_view kAlgorithmId = "xoshiro256starstar/splitmix64";

  explicit SeededRng(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() noexcept;

  /// Standard normal via the Marsaglia polar method. The second variate of
  /// each accepted pair is cached and returned by the next call.
  double gaussian() noexcept;

  /// Independent generator derived from (seed, stream). Does not advance *this.
  SeededRng split(std::uint64_t stream) const noexcept;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// One splitmix64 step; exposed for seed derivation.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace stpis
