#pragma once

namespace svlift {

struct MittagLefflerParams {
  double alpha = 1.0;
  double beta = 1.0;
  int terms = 200;           // series truncation M
  double switch_radius = 5;  // series used for |z| <= switch_radius when it is numerically safe
};

/// E_{alpha,beta}(z) = sum_n z^n / Gamma(alpha n + beta) for real z.
/// Branches: double-precision series when the terms stay moderate; the Laplace-type integral representation
/// for z < 0, alpha < 1, beta < 1 + alpha; an extended-precision series; the asymptotic expansion for large
/// negative z. Throws std::range_error when no branch applies (e.g. overflow for large positive z).
double mittag_leffler(const MittagLefflerParams& p, double z);
double mittag_leffler(double alpha, double beta, double z);

/// Individual branches, exposed for cross-validation.
double mittag_leffler_series(double alpha, double beta, double z, int terms);
double mittag_leffler_series_mp(double alpha, double beta, double z);
double mittag_leffler_integral(double alpha, double beta, double z);
double mittag_leffler_asymptotic(double alpha, double beta, double z);

}  // namespace svlift
