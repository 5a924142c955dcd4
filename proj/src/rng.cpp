#include "hgacluster/rng.hpp"

#include "hgacluster/error.hpp"

namespace hgacluster {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ContractError("Rng::below: bound must be positive");
  // Values below `threshold` would over-represent the low residues.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::pair<std::size_t, std::size_t> Rng::distinct_pair(std::size_t n) {
  if (n < 2) throw ContractError("Rng::distinct_pair: need at least two items");
  const auto first = static_cast<std::size_t>(below(n));
  auto second = static_cast<std::size_t>(below(n - 1));
  if (second >= first) ++second;
  return {first, second};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace hgacluster
