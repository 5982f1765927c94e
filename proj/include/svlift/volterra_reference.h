#pragma once

#include "svlift/brownian.h"
#include "svlift/kernels.h"
#include "svlift/lifted_sde.h"

#include <vector>

namespace svlift {

/// Lag-indexed weights: drift[L] = integral of k_b over [L h, (L+1) h], diffusion[L] = (same for k_sigma) / h.
struct ConvolutionWeights {
  double h = 0.0;
  std::vector<double> drift;
  std::vector<double> diffusion;

  static ConvolutionWeights build(const Kernel& k_b, const Kernel& k_sigma, const SimGrid& g);
};

/// X_m = x0 + sum_{j<m} drift[m-1-j] b(t_j, X_j) + sum_{j<m} diffusion[m-1-j] sigma(t_j, X_j) dW_j.
std::vector<double> direct_euler(const ConvolutionWeights& w, const Coefficients& c, double x0,
                                 const BrownianPath& noise);
std::vector<double> direct_euler(const Kernel& k_b, const Kernel& k_sigma, const Coefficients& c, double x0,
                                 const SimGrid& g, const BrownianPath& noise);

struct PathDifference {
  double sup_abs = 0.0;
  double rms = 0.0;
};

PathDifference compare_paths(const std::vector<double>& p1, const std::vector<double>& p2);

/// Root mean square of a path over its grid points.
double path_scale(const std::vector<double>& p);

}  // namespace svlift
