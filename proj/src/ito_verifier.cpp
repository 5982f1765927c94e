#include "svlift/ito_verifier.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace svlift {

SmoothObservable SmoothObservable::identity() { return power(1); }
SmoothObservable SmoothObservable::square() { return power(2); }

SmoothObservable SmoothObservable::power(int p) {
  if (p < 1) throw std::invalid_argument("power observable: exponent must be >= 1");
  SmoothObservable o;
  o.id = "x^" + std::to_string(p);
  o.f = [p](double, double x) { return std::pow(x, p); };
  o.f_t = [](double, double) { return 0.0; };
  o.f_x = [p](double, double x) { return p * std::pow(x, p - 1); };
  o.f_xx = [p](double, double x) { return p < 2 ? 0.0 : p * (p - 1) * std::pow(x, p - 2); };
  return o;
}

SmoothObservable SmoothObservable::time() {
  SmoothObservable o;
  o.id = "t";
  o.f = [](double t, double) { return t; };
  o.f_t = [](double, double) { return 1.0; };
  o.f_x = [](double, double) { return 0.0; };
  o.f_xx = [](double, double) { return 0.0; };
  return o;
}

SmoothObservable SmoothObservable::negated(const SmoothObservable& g) {
  SmoothObservable o;
  o.id = "-(" + g.id + ")";
  o.f = [g](double t, double x) { return -g.f(t, x); };
  o.f_t = [g](double t, double x) { return -g.f_t(t, x); };
  o.f_x = [g](double t, double x) { return -g.f_x(t, x); };
  o.f_xx = [g](double t, double x) { return -g.f_xx(t, x); };
  return o;
}

double derivative_consistency(const SmoothObservable& f, std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, 2.0), ux(-3.0, 3.0);
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  for (int i = 0; i < n; ++i) {
    const double t = ut(rng), x = ux(rng);
    const double e = 1e-4;
    const double dt = (f.f(t + e, x) - f.f(t - e, x)) / (2 * e);
    const double dx = (f.f(t, x + e) - f.f(t, x - e)) / (2 * e);
    const double dxx = (f.f_x(t, x + e) - f.f_x(t, x - e)) / (2 * e);
    worst = std::max({worst, rel(dt, f.f_t(t, x)), rel(dx, f.f_x(t, x)), rel(dxx, f.f_xx(t, x))});
  }
  return worst;
}

double gamma_st(const LiftedState& s, double lag) {
  if (!(lag >= 0.0)) throw std::invalid_argument("gamma_st: lag must be nonnegative");
  double sb = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < s.y_b.size(); ++i) sb += std::exp(-s.atoms_b->atoms[i].node * lag) * s.y_b[i];
  for (std::size_t i = 0; i < s.y_sigma.size(); ++i)
    ss += std::exp(-s.atoms_sigma->atoms[i].node * lag) * s.y_sigma[i];
  return s.y0 + sb + ss;
}

double ito_residual(const SmoothObservable& f, const PathSample& run, const BrownianPath& noise,
                    const DiscreteLiftMeasure& atoms_b, const DiscreteLiftMeasure& atoms_sigma, const Coefficients& c,
                    std::size_t n0, std::size_t n, const ItoOptions& opts) {
  if (!(n0 < n) || n >= run.X.size()) throw std::invalid_argument("ito_residual: need n0 < n on the path grid");
  if (run.y_b.size() != run.X.size() || run.y_sigma.size() != run.X.size())
    throw std::invalid_argument("ito_residual: factor snapshots missing");
  if (opts.analytic_kernel && (!opts.k_b || !opts.k_sigma))
    throw std::invalid_argument("ito_residual: analytic kernels requested but not supplied");
  const double h = run.h;
  const std::size_t steps = n - n0;

  // decay tables e^{-x_i L h}, L = 0..steps
  auto decay_table = [&](const DiscreteLiftMeasure& d) {
    std::vector<std::vector<double>> table(steps + 1, std::vector<double>(d.size()));
    for (std::size_t L = 0; L <= steps; ++L)
      for (std::size_t i = 0; i < d.size(); ++i) table[L][i] = std::exp(-d.atoms[i].node * h * static_cast<double>(L));
    return table;
  };
  const auto eb = decay_table(atoms_b);
  const auto es = decay_table(atoms_sigma);

  auto gamma_at = [&](std::size_t j) {
    const std::size_t L = n - j;
    double sb = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < atoms_b.size(); ++i) sb += eb[L][i] * run.y_b[j][i];
    for (std::size_t i = 0; i < atoms_sigma.size(); ++i) ss += es[L][i] * run.y_sigma[j][i];
    return run.y0 + sb + ss;
  };
  auto kernel_b = [&](std::size_t L) {
    if (opts.analytic_kernel) return (*opts.k_b)(static_cast<double>(L) * h);
    double k = 0.0;
    for (std::size_t i = 0; i < atoms_b.size(); ++i) k += atoms_b.atoms[i].mass * eb[L][i];
    return k;
  };
  auto kernel_s = [&](std::size_t L) {
    if (opts.analytic_kernel) return (*opts.k_sigma)(static_cast<double>(L) * h);
    double k = 0.0;
    for (std::size_t i = 0; i < atoms_sigma.size(); ++i) k += atoms_sigma.atoms[i].mass * es[L][i];
    return k;
  };

  double rhs = f.f(run.t[n0], gamma_at(n0));
  double time_part = 0.0, drift_part = 0.0, noise_part = 0.0, quad_part = 0.0;
  for (std::size_t j = n0; j < n; ++j) {
    const double s = run.t[j];
    const double g = gamma_at(j);
    const std::size_t L = n - j;
    const double kb = kernel_b(L), ks = kernel_s(L);
    const double b = c.b(s, run.X[j]);
    const double sig = c.sigma(s, run.X[j]);
    const double fx = f.f_x(s, g);
    time_part += f.f_t(s, g) * h;
    drift_part += fx * kb * b * h;
    noise_part += fx * ks * sig * noise.increments[j];
    quad_part += 0.5 * f.f_xx(s, g) * ks * ks * sig * sig * h;
  }
  rhs += time_part + drift_part + noise_part + quad_part;
  return f.f(run.t[n], run.X[n]) - rhs;
}

LyapunovReport lyapunov_check(const SmoothObservable& V, const Kernel& k_b, const Kernel& k_sigma,
                              const Coefficients& c, const std::vector<double>& domain,
                              const std::vector<double>& lags, double p) {
  if (domain.size() < 4 || lags.empty()) throw std::invalid_argument("lyapunov_check: grids too small");
  double x_max = 0.0;
  for (double x : domain) x_max = std::max(x_max, std::abs(x));

  // V must sit between c1|x|^p and c2|x|^p; on a finite grid that means positive ratios that do not
  // drift between the two outer bands.
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  double band_lo[2] = {lo, lo}, band_hi[2] = {0.0, 0.0};
  for (double x : domain) {
    if (x == 0.0) continue;
    const double ax = std::abs(x);
    const double r = V.f(0.0, x) / std::pow(ax, p);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    if (ax >= x_max / 4.0) {
      const int band = ax >= x_max / 2.0 ? 1 : 0;
      band_lo[band] = std::min(band_lo[band], r);
      band_hi[band] = std::max(band_hi[band], r);
    }
  }
  const bool drifts = band_hi[1] > 2.0 * band_hi[0] || band_lo[1] < 0.5 * band_lo[0];
  if (!(lo > 0.0) || !std::isfinite(hi) || drifts)
    throw std::invalid_argument("lyapunov_check: V is not comparable to |x|^p on the domain grid");

  LyapunovReport report;
  double inner = 0.0, outer = 0.0;
  LyapunovWitness worst;
  struct Sample {
    double x, lag, LV, V;
  };
  std::vector<Sample> samples;
  for (double x : domain) {
    const double v = V.f(0.0, x);
    const double b = c.b(0.0, x), s = c.sigma(0.0, x);
    for (double lag : lags) {
      const double kb = k_b(lag), ks = k_sigma(lag);
      const double lv = V.f_x(0.0, x) * kb * b + V.f_xx(0.0, x) * ks * ks * s * s;
      samples.push_back({x, lag, lv, v});
      if (v <= 0.0) continue;
      const double q = std::max(lv, 0.0) / v;
      const double ax = std::abs(x);
      if (ax >= x_max / 2.0) {
        if (q > outer || (!report.witness && q == outer)) {
          outer = q;
          worst = {x, lag, lv, v};
          report.witness = worst;
        }
      } else if (ax >= x_max / 4.0) {
        inner = std::max(inner, q);
      }
    }
  }
  if (outer > 2.0 * inner + 1e-9) {
    report.passed = false;
    report.witness = worst;
    report.message = "LV/V grows with |x|: no finite (h, d) on this grid";
    return report;
  }
  report.h_est = outer;
  double d = 0.0;
  for (const auto& s : samples) d = std::max(d, s.LV - report.h_est * s.V);
  report.d_est = d;
  report.passed = true;
  report.witness.reset();
  report.message = "pass";
  return report;
}

}  // namespace svlift
