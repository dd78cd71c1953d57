#pragma once

#include <cstdint>
#include <limits>

namespace resdep {

/// One step of the SplitMix64 finalizer. Used both to seed Xoshiro256 and to
/// derive independent per-replicate seeds.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed for replicate `index` of a study. Depends only on the pair
/// (master_seed, index), never on scheduling.
std::uint64_t derive_seed(std::uint64_t master_seed,
                          std::uint64_t index) noexcept;

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform draw on the open interval (0, 1), 53-bit resolution.
  double uniform_open() noexcept;

 private:
  std::uint64_t s_[4];
};

}  // namespace resdep
