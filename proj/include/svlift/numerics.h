#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace svlift {

std::vector<double> lin_space(double a, double b, std::size_t n);
/// n points geometrically spaced from a to b (a, b > 0).
std::vector<double> log_space(double a, double b, std::size_t n);

/// (1 - e^{-z}) / z with the limit 1 at z = 0.
double phi1(double z);
/// (1 - e^{-z}(1 + z)) / z^2 with the limit 1/2 at z = 0.
double phi2(double z);

/// Adaptive Gauss-Kronrod on a finite interval, or on [a, inf) when b is +inf.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

/// Integral of g(u) * u^{-alpha} over [ua, ub], 0 <= ua < ub <= inf, alpha in [0, 1).
/// The power singularity at u = 0 is removed by the substitution v = u^{1-alpha}; the
/// range is cut into decades so that integrands living on very different scales are resolved.
double integrate_power_weight(const std::function<double(double)>& g, double alpha, double ua, double ub,
                              double rel_tol = 1e-12);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace svlift
