#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>

namespace hgacluster {

// All randomness in the library flows through Rng. The engine is
// std::mt19937_64, whose output sequence is fixed by the C++ standard; the
// bounded draws below are implemented here rather than with
// std::uniform_int_distribution (whose algorithm is implementation-defined),
// so a seed gives the same run on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). Rejection sampling on the raw 64-bit
  /// output; bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Fair bit taken from the most significant bit of one draw.
  bool coin() { return (next() >> 63) != 0; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Two distinct indices in [0, n), uniform over ordered pairs. n >= 2.
  std::pair<std::size_t, std::size_t> distinct_pair(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer applied to base + index; used to derive replicate seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace hgacluster
