#include "svlift/numerics.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace svlift {

std::vector<double> lin_space(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  std::vector<double> out(n);
  const double step = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + step * static_cast<double>(i);
  out.back() = b;
  return out;
}

std::vector<double> log_space(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("log_space: bounds must be positive");
  std::vector<double> out = lin_space(std::log(a), std::log(b), n);
  for (double& v : out) v = std::exp(v);
  if (!out.empty()) {
    out.front() = a;
    out.back() = b;
  }
  return out;
}

double phi1(double z) {
  if (std::abs(z) < 1e-5) return 1.0 - z / 2.0 + z * z / 6.0;
  return -std::expm1(-z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 1e-3) return 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0;
  return (-std::expm1(-z) - z * std::exp(-z)) / (z * z);
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// One-shot rule on [a, b]. Boost reports the error of the rule mapped to [-1, 1] without the
// Jacobian, which makes relative tolerances unreachable on short intervals; rescale it here.
double kronrod_once(const std::function<double(double)>& f, double a, double b, double& error) {
  const double value = Kronrod::integrate(f, a, b, 0, 0.0, &error);
  error *= 0.5 * (b - a);
  return value;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double value, double error,
                double abs_tol, int depth) {
  if (error <= abs_tol || depth == 0) return value;
  const double mid = 0.5 * (a + b);
  if (!(mid > a && mid < b)) return value;
  double e1 = 0.0, e2 = 0.0;
  const double v1 = kronrod_once(f, a, mid, e1);
  const double v2 = kronrod_once(f, mid, b, e2);
  return adaptive(f, a, mid, v1, e1, 0.5 * abs_tol, depth - 1) + adaptive(f, mid, b, v2, e2, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  if (std::isinf(b)) return Kronrod::integrate(f, a, b, 20, rel_tol, &error);
  const double first = kronrod_once(f, a, b, error);
  // Tolerance relative to the one-shot estimate, with an absolute floor at rounding level.
  const double abs_tol = std::max(rel_tol * std::abs(first), 1e-300);
  return adaptive(f, a, b, first, error, abs_tol, 30);
}

double integrate_power_weight(const std::function<double(double)>& g, double alpha, double ua, double ub,
                              double rel_tol) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("integrate_power_weight: alpha must be in [0,1)");
  if (!(ua >= 0.0) || !(ub > ua)) {
    if (ub == ua) return 0.0;
    throw std::invalid_argument("integrate_power_weight: need 0 <= ua < ub");
  }
  const double p = 1.0 - alpha;
  // integral over [u0, u1] of g(u) u^{-alpha} du = (1/p) * integral over [u0^p, u1^p] of g(v^{1/p}) dv
  auto h = [&](double v) { return g(std::pow(v, 1.0 / p)); };

  std::vector<double> cuts{ua};
  const double upper_finite = std::isinf(ub) ? std::max(1e8, 10.0 * std::max(ua, 1.0)) : ub;
  double c = (ua > 0.0) ? std::pow(10.0, std::floor(std::log10(ua)) + 1.0) : 1e-10;
  while (c < upper_finite) {
    cuts.push_back(c);
    c *= 10.0;
  }
  cuts.push_back(upper_finite);

  // A relative tolerance per decade is unattainable where the integrand is negligible (underflow, rounding),
  // so pieces are refined only when their one-shot estimate matters at the level of the whole integral.
  using boost::math::quadrature::gauss_kronrod;
  struct Piece {
    double a, b, estimate;
  };
  std::vector<Piece> pieces;
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    Piece piece{std::pow(cuts[i], p), std::pow(cuts[i + 1], p), 0.0};
    piece.estimate = gauss_kronrod<double, 31>::integrate(h, piece.a, piece.b, 0, 0.0) / p;
    scale += std::abs(piece.estimate);
    pieces.push_back(piece);
  }
  auto tail = [&](double u) { return g(u) * std::pow(u, -alpha); };
  double tail_estimate = 0.0;
  if (std::isinf(ub)) {
    tail_estimate = gauss_kronrod<double, 31>::integrate(tail, upper_finite, std::numeric_limits<double>::infinity(), 0, 0.0);
    scale += std::abs(tail_estimate);
  }

  const double negligible = 1e-3 * rel_tol * scale;
  double sum = 0.0;
  for (const auto& piece : pieces) {
    if (std::abs(piece.estimate) <= negligible)
      sum += piece.estimate;
    else
      sum += integrate(h, piece.a, piece.b, rel_tol) / p;
  }
  if (std::isinf(ub)) {
    sum += std::abs(tail_estimate) <= negligible
               ? tail_estimate
               : integrate(tail, upper_finite, std::numeric_limits<double>::infinity(), rel_tol);
  }
  return sum;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace svlift
