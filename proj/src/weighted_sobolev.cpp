#include "svlift/weighted_sobolev.h"

#include "svlift/numerics.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace svlift {

double WeightFamily::operator()(int i, double x) const { return std::pow(offset + slope * x, exponent(i)); }

TripleCheck validate_weight_triple(const WeightTriple& t) {
  TripleCheck check;
  auto fail = [&](std::string msg) { check.violations.push_back(std::move(msg)); };
  if (!(t.theta_b >= 0.0 && t.theta_b < 1.0) || !(t.theta_sigma >= 0.0 && t.theta_sigma < 1.0))
    fail("theta exponents must lie in [0,1)");
  if (!(t.eta_plus < t.eta_sim)) fail("eta_plus < eta_sim required (strict)");
  if (!(t.eta_sim < t.eta_minus)) fail("eta_sim < eta_minus required (strict)");
  if (!(t.eta_minus > std::max(t.theta_b, t.theta_sigma))) fail("eta_minus > max(theta_b, theta_sigma) required");

  constexpr double match_tol = 1e-12;
  if (t.theta_sigma == 0.5) {
    fail("theta_sigma = 1/2: boundary case unsupported");
  } else if (t.theta_sigma < 0.5) {
    if (!(t.eps > 0.0 && t.eps < 0.5 - t.theta_sigma)) fail("0 < eps < 1/2 - theta_sigma required");
    if (std::abs(t.eta_plus + t.eps) > match_tol) fail("eta_plus = -eps required when theta_sigma < 1/2");
  } else {
    if (!(t.delta > 0.0 && t.delta < 0.5)) fail("0 < delta < 1/2 required");
    if (std::abs(t.eta_plus - (t.theta_sigma - 0.5 + t.delta)) > match_tol)
      fail("eta_plus = theta_sigma - 1/2 + delta required when theta_sigma > 1/2");
  }
  return check;
}

std::vector<double> default_grid(std::size_t n, double x_max) {
  if (n < 3) throw std::invalid_argument("default_grid: need at least 3 nodes");
  std::vector<double> grid{0.0};
  auto tail = log_space(1e-6, x_max, n - 1);
  grid.insert(grid.end(), tail.begin(), tail.end());
  return grid;
}

GridFunction sample(const std::function<double(double)>& f, const std::vector<double>& grid) {
  GridFunction g;
  g.x = grid;
  g.values.reserve(grid.size());
  for (double x : grid) g.values.push_back(f(x));
  return g;
}

namespace {

// Second-order derivative on a nonuniform grid (three-point formulas, one-sided at the ends).
std::vector<double> derivative(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1];
    const double hp = x[i + 1] - x[i];
    d[i] = (hm * hm * f[i + 1] - hp * hp * f[i - 1] + (hp * hp - hm * hm) * f[i]) / (hm * hp * (hm + hp));
  }
  {
    const double h1 = x[1] - x[0], h2 = x[2] - x[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] - h1 / (h2 * (h1 + h2)) * f[2];
  }
  {
    const double h1 = x[n - 2] - x[n - 3], h2 = x[n - 1] - x[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * f[n - 3] - (h1 + h2) / (h1 * h2) * f[n - 2] +
               (2.0 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1];
  }
  return d;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return sum;
}

}  // namespace

double sobolev_norm_squared(const GridFunction& f, const WeightFamily& w, int m) {
  if (m < 0) throw std::invalid_argument("sobolev_norm: order must be nonnegative");
  if (f.x.size() != f.values.size()) throw std::invalid_argument("sobolev_norm: grid/value size mismatch");
  if (f.x.size() < static_cast<std::size_t>(m) + 2 || f.x.size() < 3)
    throw std::invalid_argument("sobolev_norm: grid too small for the requested order");
  double total = 0.0;
  std::vector<double> deriv = f.values;
  std::vector<double> integrand(f.x.size());
  for (int j = 0; j <= m; ++j) {
    if (j > 0) deriv = derivative(f.x, deriv);
    for (std::size_t i = 0; i < f.x.size(); ++i) integrand[i] = deriv[i] * deriv[i] * w(j, f.x[i]);
    total += trapezoid(f.x, integrand);
  }
  return total;
}

double sobolev_norm(const GridFunction& f, const WeightFamily& w, int m) {
  return std::sqrt(sobolev_norm_squared(f, w, m));
}

Dictionary gaussian_dictionary(double c_lo, double c_hi, std::size_t n_centers, const std::vector<double>& grid) {
  Dictionary dict;
  dict.grid = grid;
  for (double mu : log_space(c_lo, c_hi, n_centers)) {
    for (double rel : {0.25, 0.5, 1.0}) {
      const double s = rel * mu;
      std::ostringstream label;
      label.precision(6);
      label << "gauss(" << mu << "," << s << ")";
      dict.functions.push_back(
          {label.str(), [mu, s](double x) { return std::exp(-(x - mu) * (x - mu) / (2.0 * s * s)); }});
    }
  }
  return dict;
}

Dictionary standard_dictionary(const std::vector<double>& grid) {
  // centers up to a tenth of the grid end so the widest bumps are not cut off
  Dictionary dict = gaussian_dictionary(1e-2, grid.back() / 10.0, 50, grid);
  dict.functions.push_back({"const", [](double) { return 1.0; }});
  for (double q : {0.5, 1.0, 2.0}) {
    dict.functions.push_back({"inv_power(" + std::to_string(q) + ")", [q](double x) { return std::pow(1.0 + x, -q); }});
  }
  return dict;
}

std::vector<double> dictionary_norms(const Dictionary& dict, const WeightFamily& w) {
  std::vector<double> norms;
  norms.reserve(dict.functions.size());
  for (const auto& fn : dict.functions) norms.push_back(sobolev_norm(sample(fn.f, dict.grid), w, 1));
  return norms;
}

double dual_norm_estimate(const DiscreteLiftMeasure& atoms, const Dictionary& dict, std::span<const double> norms) {
  if (dict.functions.empty()) throw std::invalid_argument("dual_norm_estimate: empty dictionary");
  if (norms.size() != dict.functions.size()) throw std::invalid_argument("dual_norm_estimate: norm table mismatch");
  double best = 0.0;
  for (std::size_t k = 0; k < dict.functions.size(); ++k) {
    if (!(norms[k] > 0.0) || !std::isfinite(norms[k])) continue;
    double pairing = 0.0;
    for (const auto& a : atoms.atoms) pairing += a.mass * dict.functions[k].f(a.node);
    best = std::max(best, std::abs(pairing) / norms[k]);
  }
  return best;
}

double dual_norm_estimate(const DiscreteLiftMeasure& atoms, const WeightFamily& w, const Dictionary& dict) {
  if (dict.functions.empty()) throw std::invalid_argument("dual_norm_estimate: empty dictionary");
  const auto norms = dictionary_norms(dict, w);
  return dual_norm_estimate(atoms, dict, norms);
}

DecayFit semigroup_decay_fit(const DiscreteLiftMeasure& atoms, const WeightFamily& w, std::span<const double> t_grid,
                             const Dictionary& dict) {
  if (t_grid.size() < 4) throw std::invalid_argument("semigroup_decay_fit: need at least 4 time points");
  const auto norms = dictionary_norms(dict, w);
  DecayFit fit;
  fit.t.assign(t_grid.begin(), t_grid.end());
  DiscreteLiftMeasure shifted = atoms;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("semigroup_decay_fit: times must be positive");
    for (std::size_t i = 0; i < atoms.atoms.size(); ++i)
      shifted.atoms[i].mass = atoms.atoms[i].mass * std::exp(-atoms.atoms[i].node * t);
    fit.dual_norm.push_back(dual_norm_estimate(shifted, dict, norms));
  }
  const std::size_t half = t_grid.size() / 2;
  std::vector<double> lx, ly;
  fit.used.assign(t_grid.size(), false);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (fit.dual_norm[i] < 1e-14) {
      ++fit.excluded;
      continue;
    }
    if (i < half) {
      fit.used[i] = true;
      lx.push_back(std::log(t_grid[i]));
      ly.push_back(std::log(fit.dual_norm[i]));
    }
  }
  if (lx.size() < 2) throw std::runtime_error("semigroup_decay_fit: fewer than two usable points");
  const LineFit line = fit_line(lx, ly);
  fit.gamma_hat = -line.slope;
  fit.intercept = line.intercept;
  return fit;
}

double embedding_ratio(const Dictionary& dict, const std::function<double(double)>& w_c, const WeightFamily& w) {
  if (dict.functions.empty()) throw std::invalid_argument("embedding_ratio: empty dictionary");
  double best = 0.0;
  for (const auto& fn : dict.functions) {
    const GridFunction g = sample(fn.f, dict.grid);
    double sup = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) sup = std::max(sup, std::abs(w_c(g.x[i]) * g.values[i]));
    const double norm = sobolev_norm(g, w, 1);
    if (norm > 0.0) best = std::max(best, sup / norm);
  }
  return best;
}

}  // namespace svlift
