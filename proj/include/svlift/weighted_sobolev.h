#pragma once

#include "svlift/quadrature.h"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace svlift {

/// Weights w_i(x) = (offset + slope x)^{2 eta - 1 + 2 i}, i = 0..order.
struct WeightFamily {
  double eta = 0.0;
  int order = 1;
  double offset = 1.0;
  double slope = 1.0;

  double exponent(int i) const { return 2.0 * eta - 1.0 + 2.0 * i; }
  double operator()(int i, double x) const;
};

struct WeightTriple {
  double eta_plus = 0.0;
  double eta_sim = 0.0;
  double eta_minus = 0.0;
  double theta_b = 0.0;
  double theta_sigma = 0.0;
  double eps = 0.0;
  double delta = 0.0;
};

struct TripleCheck {
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
};

TripleCheck validate_weight_triple(const WeightTriple& t);

struct GridFunction {
  std::vector<double> x;
  std::vector<double> values;
};

/// 0 followed by n - 1 log-spaced nodes from 1e-6 to x_max.
std::vector<double> default_grid(std::size_t n = 4096, double x_max = 1e4);
GridFunction sample(const std::function<double(double)>& f, const std::vector<double>& grid);

/// Squared norm: sum_{j<=m} integral |D^j f|^2 w_j dx, finite differences + trapezoid rule.
double sobolev_norm_squared(const GridFunction& f, const WeightFamily& w, int m);
double sobolev_norm(const GridFunction& f, const WeightFamily& w, int m);

struct TestFunction {
  std::string label;
  std::function<double(double)> f;
};

struct Dictionary {
  std::vector<double> grid;
  std::vector<TestFunction> functions;
};

/// Gaussians on a log grid of centers up to grid.back()/10 (scales proportional to the center), constants
/// and (1+x)^{-q}. The default grid reaches 1e6 so that bumps can follow e^{-xt} mass down to t ~ 1e-4.
Dictionary standard_dictionary(const std::vector<double>& grid = default_grid(4096, 1e6));
/// Gaussians only, centers log-spaced on [c_lo, c_hi].
Dictionary gaussian_dictionary(double c_lo, double c_hi, std::size_t n_centers,
                               const std::vector<double>& grid = default_grid());

/// W^{1,2}_w norms of every dictionary entry.
std::vector<double> dictionary_norms(const Dictionary& dict, const WeightFamily& w);

/// max_u |sum_i c_i u(x_i)| / ||u||_{W^{1,2}_w}: a lower bound on the dual norm.
double dual_norm_estimate(const DiscreteLiftMeasure& atoms, const WeightFamily& w, const Dictionary& dict);
double dual_norm_estimate(const DiscreteLiftMeasure& atoms, const Dictionary& dict, std::span<const double> norms);

struct DecayFit {
  double gamma_hat = 0.0;
  std::vector<double> t;
  std::vector<double> dual_norm;
  std::vector<bool> used;
  std::size_t excluded = 0;  // points dropped because the estimate was numerically zero
  double intercept = 0.0;
};

/// Fits log D(t) against log t on the small-t half of t_grid, D(t) the dual-norm estimate of {(x_i, c_i e^{-x_i t})}.
DecayFit semigroup_decay_fit(const DiscreteLiftMeasure& atoms, const WeightFamily& w, std::span<const double> t_grid,
                             const Dictionary& dict);

/// max over the dictionary of sup|w_c u| / ||u||_{W^{1,2}_w} on the dictionary grid.
double embedding_ratio(const Dictionary& dict, const std::function<double(double)>& w_c, const WeightFamily& w);

}  // namespace svlift
