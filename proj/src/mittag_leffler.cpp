#include "svlift/mittag_leffler.h"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace svlift {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// log of the largest |z^n / Gamma(alpha n + beta)| over n <= terms (Gamma poles give zero terms).
double log_max_term(double alpha, double beta, double z, int terms) {
  double best = -std::numeric_limits<double>::infinity();
  const double lz = std::log(std::abs(z));
  for (int n = 0; n <= terms; ++n) {
    const double arg = alpha * n + beta;
    if (arg <= 0.0 && arg == std::floor(arg)) continue;
    best = std::max(best, n * lz - std::lgamma(arg));
  }
  return best;
}

}  // namespace

double mittag_leffler_series(double alpha, double beta, double z, int terms) {
  double sum = 0.0;
  const double lz = std::log(std::abs(z));
  const double sign = z < 0.0 ? -1.0 : 1.0;
  for (int n = 0; n <= terms; ++n) {
    const double magnitude = std::exp(n * lz - std::lgamma(alpha * n + beta));
    sum += (n % 2 == 1 ? sign : 1.0) * magnitude;
  }
  return sum;
}

double mittag_leffler_series_mp(double alpha, double beta, double z) {
  using mp = boost::multiprecision::cpp_bin_float_100;
  const mp za(z);
  mp sum = 0, zn = 1;
  // Keep adding terms until they are negligible against the largest one seen.
  mp largest = 0;
  for (int n = 0; n < 20000; ++n) {
    const mp term = zn / boost::math::tgamma(mp(alpha) * n + mp(beta));
    sum += term;
    if (abs(term) > largest) largest = abs(term);
    if (n > 10 && abs(term) < mp(1e-40) * (abs(sum) + 1e-300) && abs(term) < largest * mp(1e-60)) break;
    zn *= za;
  }
  return static_cast<double>(sum);
}

double mittag_leffler_integral(double alpha, double beta, double z) {
  if (!(z < 0.0) || !(alpha > 0.0 && alpha < 1.0) || !(beta < 1.0 + alpha))
    throw std::domain_error("mittag_leffler_integral: needs z < 0, 0 < alpha < 1, beta < 1 + alpha");
  const double s1 = std::sin(kPi * (1.0 - beta));
  const double s2 = std::sin(kPi * (1.0 - beta + alpha));
  const double c = std::cos(alpha * kPi);
  auto kernel = [=](double r) {
    if (r <= 0.0) return 0.0;
    const double num = r * s1 - z * s2;
    const double den = r * r - 2.0 * r * z * c + z * z;
    const double e = std::pow(r, 1.0 / alpha);
    if (e > 745.0) return 0.0;  // exp underflows while the power prefactor may overflow
    return std::pow(r, (1.0 - beta) / alpha) * std::exp(-e) * num / den;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  const double az = std::abs(z);
  // Resolve the peak near r = |z| and the decay scale r ~ 1 separately.
  double cuts[] = {0.0, std::min(1.0, az), std::max(1.0, az), 2.0 * std::max(1.0, az)};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (cuts[i + 1] > cuts[i]) sum += ts.integrate(kernel, cuts[i], cuts[i + 1], 1e-13);
  }
  sum += es.integrate([&](double u) { return kernel(cuts[3] + u); }, 1e-13);
  return sum / (alpha * kPi);
}

double mittag_leffler_asymptotic(double alpha, double beta, double z) {
  if (!(z < 0.0) || !(alpha > 0.0 && alpha < 2.0))
    throw std::domain_error("mittag_leffler_asymptotic: needs z < 0 and 0 < alpha < 2");
  double sum = 0.0;
  double zk = 1.0;
  for (int k = 1; k <= 12; ++k) {
    zk /= z;
    const double arg = beta - alpha * k;
    if (arg <= 0.0 && arg == std::floor(arg)) continue;  // 1/Gamma vanishes at the poles
    const double term = zk / std::tgamma(arg);
    sum -= term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double mittag_leffler(const MittagLefflerParams& p, double z) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0)) throw std::domain_error("mittag_leffler: alpha, beta must be positive");
  if (p.terms < 50) throw std::domain_error("mittag_leffler: at least 50 series terms required");
  if (z == 0.0) return 1.0 / std::tgamma(p.beta);
  const double az = std::abs(z);

  if (az <= p.switch_radius) {
    // Series in double precision: accepted when cancellation costs < 3 digits and the truncated tail is tiny.
    const double lmax = log_max_term(p.alpha, p.beta, z, p.terms);
    const double ltail = p.terms * std::log(az) - std::lgamma(p.alpha * p.terms + p.beta);
    if (lmax < std::log(1e3) && ltail < std::log(1e-16)) return mittag_leffler_series(p.alpha, p.beta, z, p.terms);
  }
  if (z < 0.0 && p.alpha < 1.0 && p.beta < 1.0 + p.alpha) return mittag_leffler_integral(p.alpha, p.beta, z);
  if (std::pow(az, 1.0 / p.alpha) < 60.0) return mittag_leffler_series_mp(p.alpha, p.beta, z);
  if (z < 0.0 && p.alpha < 2.0) return mittag_leffler_asymptotic(p.alpha, p.beta, z);
  throw std::range_error("mittag_leffler: argument outside the supported range");
}

double mittag_leffler(double alpha, double beta, double z) {
  MittagLefflerParams p;
  p.alpha = alpha;
  p.beta = beta;
  return mittag_leffler(p, z);
}

}  // namespace svlift
