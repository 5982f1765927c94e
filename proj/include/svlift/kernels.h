#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace svlift {

enum class KernelVariant { ExpSum, Fractional, Gamma, Damped, Shifted };

/// One term c * exp(-y t) of an exponential-sum kernel.
struct ExpTerm {
  double weight;  // c > 0
  double rate;    // y >= 0
};

/// Completely monotone convolution kernel from the catalog:
///   ExpSum      sum_i c_i e^{-y_i t}
///   Fractional  t^{a-1} / Gamma(a),               a in (0,1)
///   Gamma       e^{-b t} t^{a-1} / Gamma(a),      a in (0,1), b > 0
///   Damped      e^{-b t} K(t)                     K a non-wrapper catalog kernel
///   Shifted     K(t + d)                          K a non-wrapper catalog kernel
/// Values are immutable after construction.
class Kernel {
 public:
  static Kernel exp_sum(std::vector<ExpTerm> terms);
  static Kernel fractional(double alpha);
  static Kernel gamma(double alpha, double rate);
  static Kernel damped(const Kernel& base, double rate);
  static Kernel shifted(const Kernel& base, double delta);

  KernelVariant variant() const { return variant_; }
  const std::vector<ExpTerm>& terms() const { return terms_; }
  double alpha() const { return alpha_; }
  /// Exponential rate (Gamma), damping rate (Damped) or shift (Shifted).
  double parameter() const { return parameter_; }
  const Kernel* base() const { return base_.get(); }
  bool is_wrapper() const { return variant_ == KernelVariant::Damped || variant_ == KernelVariant::Shifted; }
  /// True when k(t) stays bounded as t -> 0.
  bool bounded_at_zero() const;

  /// k(t) for t > 0; throws DomainError otherwise.
  double operator()(double t) const;
  std::string describe() const;

 private:
  Kernel() = default;
  KernelVariant variant_ = KernelVariant::ExpSum;
  std::vector<ExpTerm> terms_;
  double alpha_ = 0.0;
  double parameter_ = 0.0;
  std::shared_ptr<const Kernel> base_;
};

double eval_kernel(const Kernel& k, double t);

/// Exact integral of k over [a, b], 0 <= a <= b (closed forms via the regularized incomplete gamma function).
double kernel_integral(const Kernel& k, double a, double b);

/// A nonnegative atom (x, c) of a lift measure.
struct Atom {
  double node;
  double mass;
};

/// amplitude * (x - edge)^{-exponent} * exp(-tilt * x) on (edge, inf). Covers every density of the catalog:
/// fractional (edge 0), gamma and damped (edge > 0), shifted (tilt > 0).
struct PowerLawDensity {
  double amplitude = 1.0;
  double exponent = 0.5;
  double edge = 0.0;
  double tilt = 0.0;

  double operator()(double x) const;
};

struct Interval {
  double lo;
  double hi;
};

/// Default support truncation carried by density measures.
inline constexpr Interval kDefaultSupport{1e-6, 1e6};
/// Offset added to the minimal decay exponent 1 - alpha of power-law measures.
inline constexpr double kThetaOffset = 0.05;

struct LiftMeasureSpec {
  std::variant<std::vector<Atom>, PowerLawDensity> form;
  double theta = 0.0;
  Interval support = kDefaultSupport;

  bool is_atomic() const { return std::holds_alternative<std::vector<Atom>>(form); }
  const std::vector<Atom>& atoms() const { return std::get<std::vector<Atom>>(form); }
  const PowerLawDensity& density() const { return std::get<PowerLawDensity>(form); }
};

LiftMeasureSpec lift_measure(const Kernel& k);

struct LaplaceResult {
  double value = 0.0;
  /// Estimated neglected contribution outside the truncation (0 for atoms or untruncated integrals).
  double tail = 0.0;
};

/// Integral of e^{-lambda x} against m. Atoms are summed exactly. Densities are integrated over their full
/// support unless a truncation is given; a truncated integral whose tail exceeds rel_tol * |value| throws TailError.
LaplaceResult laplace_of_measure(const LiftMeasureSpec& m, double lambda, std::optional<Interval> truncation = {},
                                 double rel_tol = 1e-8);

/// Integral of g(x) against m restricted to [a, b] (b may be +inf).
double integrate_against(const LiftMeasureSpec& m, const std::function<double(double)>& g, double a, double b);

/// Truncated tempered mass: integral of (1+x)^{-theta} over [0, upper] against m.
double tempered_mass(const LiftMeasureSpec& m, double upper);
/// Relative change of tempered_mass when the upper truncation doubles from `upper`.
double theta_stability(const LiftMeasureSpec& m, double upper = kDefaultSupport.hi);

struct MonotonicityViolation {
  int order;
  std::size_t index;
  double value;  // (-1)^order times the divided difference
};

struct MonotonicityReport {
  std::vector<MonotonicityViolation> violations;
  std::vector<std::string> warnings;
  bool passed() const { return violations.empty(); }
};

/// Checks (-1)^j k[t_i..t_{i+j}] >= -tol for j <= max_order (divided differences, which reduce to scaled
/// forward differences on uniform grids), tol = 1e-9 * max|k| over the grid.
MonotonicityReport check_complete_monotonicity(const Kernel& k, int max_order, const std::vector<double>& grid);

}  // namespace svlift
