#include "svlift/brownian.h"

#include <cmath>
#include <random>
#include <stdexcept>

namespace svlift {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

void SimGrid::validate() const {
  if (N < 1) throw std::invalid_argument("grid: N must be >= 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("grid: T must be positive");
}

BrownianPath BrownianPath::generate(std::uint64_t seed, std::size_t n, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("brownian: step must be positive");
  BrownianPath w;
  w.seed = seed;
  w.h = h;
  w.increments.resize(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(h));
  for (auto& dw : w.increments) dw = normal(rng);
  return w;
}

BrownianPath BrownianPath::coarsen() const {
  if (increments.size() % 2 != 0) throw std::invalid_argument("brownian: coarsen needs an even count");
  BrownianPath w;
  w.seed = seed;
  w.h = 2.0 * h;
  w.increments.resize(increments.size() / 2);
  for (std::size_t i = 0; i < w.increments.size(); ++i) w.increments[i] = increments[2 * i] + increments[2 * i + 1];
  return w;
}

BrownianPath BrownianPath::slice(std::size_t from, std::size_t count) const {
  if (from + count > increments.size()) throw std::out_of_range("brownian: slice out of range");
  BrownianPath w;
  w.seed = seed;
  w.h = h;
  w.increments.assign(increments.begin() + static_cast<std::ptrdiff_t>(from),
                      increments.begin() + static_cast<std::ptrdiff_t>(from + count));
  return w;
}

}  // namespace svlift
