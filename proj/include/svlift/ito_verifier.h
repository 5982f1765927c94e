#pragma once

#include "svlift/kernels.h"
#include "svlift/lifted_sde.h"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace svlift {

struct SmoothObservable {
  std::string id;
  std::function<double(double t, double x)> f;
  std::function<double(double t, double x)> f_t;
  std::function<double(double t, double x)> f_x;
  std::function<double(double t, double x)> f_xx;

  static SmoothObservable identity();                // x
  static SmoothObservable square();                  // x^2
  static SmoothObservable power(int p);              // x^p
  static SmoothObservable time();                    // t
  static SmoothObservable negated(const SmoothObservable& g);
};

/// Largest relative mismatch between the declared partials and central differences at `n` pseudo-random points.
double derivative_consistency(const SmoothObservable& f, std::uint64_t seed = 1, int n = 20);

/// y0 + sum_i e^{-x_i lag} (y_b,i + ...) over both factor families.
double gamma_st(const LiftedState& s, double lag);

struct ItoOptions {
  /// Evaluate k_b, k_sigma analytically instead of through the atom sums.
  bool analytic_kernel = false;
  const Kernel* k_b = nullptr;
  const Kernel* k_sigma = nullptr;
};

/// Residual of the Ito formula between grid indices n0 < n of a path recorded with factor snapshots.
/// All time integrals use the left-point rule on the path grid and the path's own increments.
double ito_residual(const SmoothObservable& f, const PathSample& run, const BrownianPath& noise,
                    const DiscreteLiftMeasure& atoms_b, const DiscreteLiftMeasure& atoms_sigma, const Coefficients& c,
                    std::size_t n0, std::size_t n, const ItoOptions& opts = {});

struct LyapunovWitness {
  double x = 0.0;
  double lag = 0.0;
  double LV = 0.0;
  double V = 0.0;
};

struct LyapunovReport {
  bool passed = false;
  double h_est = 0.0;
  double d_est = 0.0;
  std::optional<LyapunovWitness> witness;
  std::string message;
};

/// LV(x, lag) = V'(x) k_b(lag) b(x) + V''(x) k_sigma(lag)^2 sigma(x)^2 with Gamma identified with x on the domain
/// grid. Fails when LV+/V over the outer band |x| in [X/2, X] exceeds twice its value on [X/4, X/2).
LyapunovReport lyapunov_check(const SmoothObservable& V, const Kernel& k_b, const Kernel& k_sigma,
                              const Coefficients& c, const std::vector<double>& domain,
                              const std::vector<double>& lags, double p = 2.0);

}  // namespace svlift
