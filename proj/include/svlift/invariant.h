#pragma once

#include "svlift/kernels.h"
#include "svlift/lifted_sde.h"
#include "svlift/quadrature.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace svlift {

/// e^{-delta t} t^{beta-1} E_{beta,beta}(-t^beta).
double gamma_resolvent(double delta, double beta, double t);

enum class ResolventConvention {
  Plus,   // R = F + F * R
  Minus,  // R = F - F * R
};

/// (F * R)(t) = integral over [0, t] of F(t - s) R(s) ds; both factors may carry integrable singularities at 0.
double convolve(const std::function<double(double)>& F, const std::function<double(double)>& R, double t);

/// sup over t_grid of |R(t) - F(t) -/+ (F * R)(t)|.
double resolvent_identity_residual(const std::function<double(double)>& F, const std::function<double(double)>& R,
                                   std::span<const double> t_grid,
                                   ResolventConvention convention = ResolventConvention::Plus);

/// Integral of R over [0, T] (tanh-sinh pieces, singularity at 0 allowed).
double integrate_kernel(const std::function<double(double)>& R, double T);

enum class LTStatus { Pass, Fail, Inconclusive };
enum class LTRole { Drift, Diffusion };

struct LTReport {
  LTStatus status = LTStatus::Inconclusive;
  double l1_integral = 0.0;  // integral of F over (0, inf); +inf if divergent
  double l2_integral = 0.0;  // integral of F^2 over (0, inf); +inf if divergent
  double origin_exponent = 0.0;
  double tail_exponent = 0.0;
  std::string message;
};

struct LTWindow {
  double lo = 50.0;
  double hi = 500.0;
};

/// Checks F in L^1 (role Drift) or F in L^2 (role Diffusion) on (0, inf) from a power fit at the origin, a
/// power/exponential fit on the tail window and truncated quadrature; both integrals are always reported.
LTReport check_LT_assumption(const std::function<double(double)>& F, LTRole role = LTRole::Drift,
                             LTWindow window = {});
LTReport check_LT_assumption(const Kernel& k, LTRole role = LTRole::Drift, LTWindow window = {});

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);
/// 5% critical value 1.358 sqrt((n + m) / (n m)).
double ks_critical_value(std::size_t n, std::size_t m);

struct LongRunConfig {
  Kernel k_b = Kernel::gamma(0.3, 1.0);
  Kernel k_sigma = Kernel::gamma(0.7, 1.0);
  PartitionSpec partition;
  Coefficients coeff;
  double x0 = 0.0;
  double T_long = 50.0;
  std::size_t N = 5000;
  std::size_t paths = 2000;
  std::uint64_t seed = 0;
  std::vector<double> checkpoints;  // must lie on the grid
  double burn_in = 0.2;
  /// Restart probe: continue ensemble B from restart_from for restart_span time units with fresh noise.
  double restart_from = 0.0;
  double restart_span = 0.0;
  unsigned threads = 1;
};

struct KSRow {
  double t1 = 0.0;
  double t2 = 0.0;
  double statistic = 0.0;
  double critical = 0.0;
};

struct LongRunReport {
  std::vector<double> checkpoints;
  std::vector<std::vector<double>> samples;  // ensemble A, one vector per checkpoint, path order
  std::vector<double> mean;
  std::vector<double> second_moment;
  std::vector<KSRow> ks;  // A at t1 against the independent ensemble B at t2, post burn-in pairs
  std::optional<KSRow> restart;
  std::size_t exploded = 0;
  bool failed = false;
  std::string message;
  LTReport lt_b;
  LTReport lt_sigma;

  /// max second moment over post-burn-in checkpoints divided by its value at the first one.
  double moment_ratio(double burn_in_time) const;
  const KSRow* find_ks(double t1, double t2) const;
};

LongRunReport long_run(const LongRunConfig& cfg);

}  // namespace svlift
