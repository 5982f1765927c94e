#include "svlift/volterra_reference.h"

#include <cmath>
#include <stdexcept>

namespace svlift {

ConvolutionWeights ConvolutionWeights::build(const Kernel& k_b, const Kernel& k_sigma, const SimGrid& g) {
  g.validate();
  ConvolutionWeights w;
  w.h = g.h();
  w.drift.resize(g.N);
  w.diffusion.resize(g.N);
  for (std::size_t lag = 0; lag < g.N; ++lag) {
    const double a = static_cast<double>(lag) * w.h;
    const double b = static_cast<double>(lag + 1) * w.h;
    w.drift[lag] = kernel_integral(k_b, a, b);
    w.diffusion[lag] = kernel_integral(k_sigma, a, b) / w.h;
  }
  return w;
}

std::vector<double> direct_euler(const ConvolutionWeights& w, const Coefficients& c, double x0,
                                 const BrownianPath& noise) {
  const std::size_t n = noise.increments.size();
  if (w.drift.size() < n) throw std::invalid_argument("direct_euler: weight table shorter than the path");
  std::vector<double> X(n + 1, x0), drift(n), shock(n);
  for (std::size_t m = 1; m <= n; ++m) {
    const std::size_t j_new = m - 1;
    const double t = static_cast<double>(j_new) * w.h;
    drift[j_new] = c.b(t, X[j_new]);
    shock[j_new] = c.sigma(t, X[j_new]) * noise.increments[j_new];
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t lag = m - 1 - j;
      acc += w.drift[lag] * drift[j] + w.diffusion[lag] * shock[j];
    }
    X[m] = x0 + acc;
  }
  return X;
}

std::vector<double> direct_euler(const Kernel& k_b, const Kernel& k_sigma, const Coefficients& c, double x0,
                                 const SimGrid& g, const BrownianPath& noise) {
  if (noise.increments.size() != g.N) throw std::invalid_argument("direct_euler: Brownian path length mismatch");
  return direct_euler(ConvolutionWeights::build(k_b, k_sigma, g), c, x0, noise);
}

PathDifference compare_paths(const std::vector<double>& p1, const std::vector<double>& p2) {
  if (p1.size() != p2.size() || p1.empty()) throw std::invalid_argument("compare_paths: grid mismatch");
  PathDifference d;
  double sq = 0.0;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const double diff = std::abs(p1[i] - p2[i]);
    d.sup_abs = std::max(d.sup_abs, diff);
    sq += diff * diff;
  }
  d.rms = std::sqrt(sq / static_cast<double>(p1.size()));
  return d;
}

double path_scale(const std::vector<double>& p) {
  double sq = 0.0;
  for (double v : p) sq += v * v;
  return p.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(p.size()));
}

}  // namespace svlift
