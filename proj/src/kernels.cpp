#include "svlift/kernels.h"

#include "svlift/errors.h"
#include "svlift/numerics.h"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace svlift {

namespace {

void require_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument(std::string(who) + ": alpha must lie in (0,1)");
}

double power_law_normalizer(double alpha) { return 1.0 / (std::tgamma(alpha) * std::tgamma(1.0 - alpha)); }

// Integral of e^{-r u} u^{a-1} / Gamma(a) over [lo, hi].
double gamma_kernel_integral(double alpha, double rate, double lo, double hi) {
  using boost::math::gamma_p;
  using boost::math::gamma_q;
  if (hi <= lo) return 0.0;
  const double scale = std::pow(rate, -alpha);
  if (rate * lo > alpha) return scale * (gamma_q(alpha, rate * lo) - gamma_q(alpha, rate * hi));
  const double upper = std::isinf(hi) ? 1.0 : gamma_p(alpha, rate * hi);
  return scale * (upper - gamma_p(alpha, rate * lo));
}

double exp_sum_integral(const std::vector<ExpTerm>& terms, double lo, double hi) {
  double sum = 0.0;
  for (const auto& term : terms) {
    if (term.rate == 0.0) {
      sum += term.weight * (hi - lo);
    } else {
      sum += term.weight * std::exp(-term.rate * lo) * (-std::expm1(-term.rate * (hi - lo))) / term.rate;
    }
  }
  return sum;
}

}  // namespace

Kernel Kernel::exp_sum(std::vector<ExpTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("exp_sum: at least one term required");
  for (const auto& term : terms) {
    if (!(term.weight > 0.0) || !std::isfinite(term.weight))
      throw std::invalid_argument("exp_sum: weights must be positive and finite");
    if (!(term.rate >= 0.0) || !std::isfinite(term.rate))
      throw std::invalid_argument("exp_sum: rates must be nonnegative and finite");
  }
  Kernel k;
  k.variant_ = KernelVariant::ExpSum;
  k.terms_ = std::move(terms);
  return k;
}

Kernel Kernel::fractional(double alpha) {
  require_alpha(alpha, "fractional");
  Kernel k;
  k.variant_ = KernelVariant::Fractional;
  k.alpha_ = alpha;
  return k;
}

Kernel Kernel::gamma(double alpha, double rate) {
  require_alpha(alpha, "gamma");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("gamma: rate must be positive");
  Kernel k;
  k.variant_ = KernelVariant::Gamma;
  k.alpha_ = alpha;
  k.parameter_ = rate;
  return k;
}

Kernel Kernel::damped(const Kernel& base, double rate) {
  if (base.is_wrapper()) throw std::invalid_argument("damped: base must be a non-wrapper catalog kernel");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("damped: rate must be positive");
  Kernel k;
  k.variant_ = KernelVariant::Damped;
  k.parameter_ = rate;
  k.base_ = std::make_shared<const Kernel>(base);
  return k;
}

Kernel Kernel::shifted(const Kernel& base, double delta) {
  if (base.is_wrapper()) throw std::invalid_argument("shifted: base must be a non-wrapper catalog kernel");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("shifted: delta must be positive");
  Kernel k;
  k.variant_ = KernelVariant::Shifted;
  k.parameter_ = delta;
  k.base_ = std::make_shared<const Kernel>(base);
  return k;
}

bool Kernel::bounded_at_zero() const {
  switch (variant_) {
    case KernelVariant::ExpSum:
    case KernelVariant::Shifted:
      return true;
    case KernelVariant::Fractional:
    case KernelVariant::Gamma:
      return false;
    case KernelVariant::Damped:
      return base_->bounded_at_zero();
  }
  return false;
}

double Kernel::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("kernel evaluated at non-positive time");
  switch (variant_) {
    case KernelVariant::ExpSum: {
      double sum = 0.0;
      for (const auto& term : terms_) sum += term.weight * std::exp(-term.rate * t);
      return sum;
    }
    case KernelVariant::Fractional:
      return std::pow(t, alpha_ - 1.0) / std::tgamma(alpha_);
    case KernelVariant::Gamma:
      return std::exp(-parameter_ * t) * std::pow(t, alpha_ - 1.0) / std::tgamma(alpha_);
    case KernelVariant::Damped:
      return std::exp(-parameter_ * t) * (*base_)(t);
    case KernelVariant::Shifted:
      return (*base_)(t + parameter_);
  }
  return 0.0;
}

std::string Kernel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (variant_) {
    case KernelVariant::ExpSum:
      os << "exp_sum(";
      for (std::size_t i = 0; i < terms_.size(); ++i)
        os << (i ? ";" : "") << terms_[i].weight << "@" << terms_[i].rate;
      os << ")";
      break;
    case KernelVariant::Fractional:
      os << "fractional(alpha=" << alpha_ << ")";
      break;
    case KernelVariant::Gamma:
      os << "gamma(alpha=" << alpha_ << ",rate=" << parameter_ << ")";
      break;
    case KernelVariant::Damped:
      os << "damped(" << base_->describe() << ",rate=" << parameter_ << ")";
      break;
    case KernelVariant::Shifted:
      os << "shifted(" << base_->describe() << ",delta=" << parameter_ << ")";
      break;
  }
  return os.str();
}

double eval_kernel(const Kernel& k, double t) { return k(t); }

double kernel_integral(const Kernel& k, double a, double b) {
  if (!(a >= 0.0) || b < a) throw DomainError("kernel_integral: need 0 <= a <= b");
  if (a == b) return 0.0;
  switch (k.variant()) {
    case KernelVariant::ExpSum:
      return exp_sum_integral(k.terms(), a, b);
    case KernelVariant::Fractional:
      return (std::pow(b, k.alpha()) - std::pow(a, k.alpha())) / std::tgamma(k.alpha() + 1.0);
    case KernelVariant::Gamma:
      return gamma_kernel_integral(k.alpha(), k.parameter(), a, b);
    case KernelVariant::Damped: {
      const Kernel& base = *k.base();
      const double rate = k.parameter();
      switch (base.variant()) {
        case KernelVariant::ExpSum: {
          std::vector<ExpTerm> terms = base.terms();
          for (auto& term : terms) term.rate += rate;
          return exp_sum_integral(terms, a, b);
        }
        case KernelVariant::Fractional:
          return gamma_kernel_integral(base.alpha(), rate, a, b);
        case KernelVariant::Gamma:
          return gamma_kernel_integral(base.alpha(), base.parameter() + rate, a, b);
        default:
          break;
      }
      break;
    }
    case KernelVariant::Shifted:
      return kernel_integral(*k.base(), a + k.parameter(), b + k.parameter());
  }
  throw std::logic_error("kernel_integral: unsupported kernel");
}

double PowerLawDensity::operator()(double x) const {
  if (!(x > edge)) return 0.0;
  return amplitude * std::pow(x - edge, -exponent) * std::exp(-tilt * x);
}

LiftMeasureSpec lift_measure(const Kernel& k) {
  LiftMeasureSpec spec;
  switch (k.variant()) {
    case KernelVariant::ExpSum: {
      std::vector<Atom> atoms;
      for (const auto& term : k.terms()) atoms.push_back({term.rate, term.weight});
      spec.form = std::move(atoms);
      spec.theta = 0.0;
      return spec;
    }
    case KernelVariant::Fractional:
    case KernelVariant::Gamma: {
      PowerLawDensity d;
      d.amplitude = power_law_normalizer(k.alpha());
      d.exponent = k.alpha();
      d.edge = k.variant() == KernelVariant::Gamma ? k.parameter() : 0.0;
      spec.form = d;
      spec.theta = 1.0 - k.alpha() + kThetaOffset;
      return spec;
    }
    case KernelVariant::Damped: {
      spec = lift_measure(*k.base());
      if (spec.is_atomic()) {
        auto atoms = spec.atoms();
        for (auto& atom : atoms) atom.node += k.parameter();
        spec.form = std::move(atoms);
      } else {
        auto d = spec.density();
        d.edge += k.parameter();
        spec.form = d;
      }
      return spec;
    }
    case KernelVariant::Shifted: {
      spec = lift_measure(*k.base());
      if (spec.is_atomic()) {
        auto atoms = spec.atoms();
        for (auto& atom : atoms) atom.mass *= std::exp(-k.parameter() * atom.node);
        spec.form = std::move(atoms);
      } else {
        auto d = spec.density();
        d.tilt += k.parameter();
        spec.form = d;
      }
      spec.theta = 0.0;
      return spec;
    }
  }
  throw std::logic_error("lift_measure: unsupported kernel");
}

double integrate_against(const LiftMeasureSpec& m, const std::function<double(double)>& g, double a, double b) {
  if (b <= a) return 0.0;
  if (m.is_atomic()) {
    double sum = 0.0;
    for (const auto& atom : m.atoms())
      if (atom.node >= a && atom.node <= b) sum += atom.mass * g(atom.node);
    return sum;
  }
  const PowerLawDensity& d = m.density();
  const double lo = std::max(a, d.edge);
  if (b <= lo) return 0.0;
  auto weighted = [&](double u) {
    const double x = d.edge + u;
    const double damp = d.tilt > 0.0 ? std::exp(-d.tilt * x) : 1.0;
    return d.amplitude * g(x) * damp;
  };
  return integrate_power_weight(weighted, d.exponent, lo - d.edge, b - d.edge);
}

LaplaceResult laplace_of_measure(const LiftMeasureSpec& m, double lambda, std::optional<Interval> truncation,
                                 double rel_tol) {
  if (!(lambda >= 0.0)) throw DomainError("laplace_of_measure: lambda must be nonnegative");
  LaplaceResult result;
  if (m.is_atomic()) {
    for (const auto& atom : m.atoms()) result.value += atom.mass * std::exp(-lambda * atom.node);
    return result;
  }
  const PowerLawDensity& d = m.density();
  const double inf = std::numeric_limits<double>::infinity();
  if (!truncation && lambda + d.tilt <= 0.0) throw DomainError("laplace_of_measure: divergent at lambda = 0");
  auto kernel = [lambda](double x) { return std::exp(-lambda * x); };
  if (!truncation) {
    result.value = integrate_against(m, kernel, d.edge, inf);
    return result;
  }
  result.value = integrate_against(m, kernel, truncation->lo, truncation->hi);
  const double below = integrate_against(m, kernel, d.edge, truncation->lo);
  const double above = (lambda + d.tilt > 0.0) ? integrate_against(m, kernel, truncation->hi, inf) : inf;
  result.tail = below + above;
  if (!(result.tail <= rel_tol * std::abs(result.value))) {
    throw TailError("laplace_of_measure: truncation tail above tolerance", result.value, result.tail);
  }
  return result;
}

double tempered_mass(const LiftMeasureSpec& m, double upper) {
  const double theta = m.theta;
  return integrate_against(m, [theta](double x) { return std::pow(1.0 + x, -theta); }, 0.0, upper);
}

double theta_stability(const LiftMeasureSpec& m, double upper) {
  const double base = tempered_mass(m, upper);
  const double doubled = tempered_mass(m, 2.0 * upper);
  if (base == 0.0) return doubled == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(doubled - base) / std::abs(base);
}

MonotonicityReport check_complete_monotonicity(const Kernel& k, int max_order, const std::vector<double>& grid) {
  if (max_order < 0 || max_order > 6) throw std::invalid_argument("check_complete_monotonicity: order must be in [0,6]");
  if (grid.size() < static_cast<std::size_t>(max_order) + 1)
    throw std::invalid_argument("check_complete_monotonicity: grid too short for the requested order");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("check_complete_monotonicity: grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("check_complete_monotonicity: grid must be strictly increasing");
  }

  MonotonicityReport report;
  double max_step = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) max_step = std::max(max_step, grid[i] - grid[i - 1]);
  if (max_step > grid.front() * (1.0 + 1e-9)) {
    report.warnings.push_back("grid step " + std::to_string(max_step) + " exceeds smallest grid point " +
                              std::to_string(grid.front()) + "; differences may not resolve the kernel curvature");
  }

  std::vector<double> values(grid.size());
  double max_abs = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = k(grid[i]);
    max_abs = std::max(max_abs, std::abs(values[i]));
  }
  const double tol = 1e-9 * max_abs;

  // Newton table; dd[i] holds k[t_i, ..., t_{i+j}] at level j.
  std::vector<double> dd = values;
  double factorial = 1.0;
  for (int j = 0; j <= max_order; ++j) {
    if (j > 0) {
      factorial *= j;
      for (std::size_t i = 0; i + j < grid.size(); ++i) dd[i] = (dd[i + 1] - dd[i]) / (grid[i + j] - grid[i]);
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i + j < grid.size(); ++i) {
      // Rescale to forward-difference units: exact on uniform grids.
      const double mean_step = j > 0 ? (grid[i + j] - grid[i]) / j : 1.0;
      const double scaled = sign * dd[i] * factorial * std::pow(mean_step, j);
      if (scaled < -tol) report.violations.push_back({j, i, scaled});
    }
  }
  return report;
}

}  // namespace svlift
