#pragma once

#include <cstdint>
#include <vector>

namespace svlift {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);
/// Per-path seed: mix64(master + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct SimGrid {
  double T = 1.0;
  std::size_t N = 1000;

  double h() const { return T / static_cast<double>(N); }
  void validate() const;
};

/// Increments dW_m ~ N(0, h), m = 0..N-1, drawn from mt19937_64 seeded with `seed`.
struct BrownianPath {
  std::uint64_t seed = 0;
  double h = 0.0;
  std::vector<double> increments;

  static BrownianPath generate(std::uint64_t seed, std::size_t n, double h);
  /// Same path on a grid twice as coarse (pairwise sums); requires an even number of increments.
  BrownianPath coarsen() const;
  /// Increments [from, from + count).
  BrownianPath slice(std::size_t from, std::size_t count) const;
};

}  // namespace svlift
