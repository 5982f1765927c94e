#include "svlift/invariant.h"

#include "svlift/brownian.h"
#include "svlift/errors.h"
#include "svlift/mittag_leffler.h"
#include "svlift/numerics.h"
#include "svlift/parallel.h"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace svlift {

double gamma_resolvent(double delta, double beta, double t) {
  if (!(delta > 0.0)) throw DomainError("gamma_resolvent: delta must be positive");
  if (!(beta > 0.0 && beta < 0.5)) throw DomainError("gamma_resolvent: beta must lie in (0, 1/2)");
  if (!(t > 0.0)) throw DomainError("gamma_resolvent: t must be positive");
  return std::exp(-delta * t) * std::pow(t, beta - 1.0) * mittag_leffler(beta, beta, -std::pow(t, beta));
}

namespace {

double tanh_sinh_integral(const std::function<double(double)>& f, double a, double b) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  if (b <= a) return 0.0;
  return ts.integrate(f, a, b, 1e-10);
}

}  // namespace

double convolve(const std::function<double(double)>& F, const std::function<double(double)>& R, double t) {
  if (!(t > 0.0)) return 0.0;
  const double half = 0.5 * t;
  // Each half is written so that its singular factor sits at the left endpoint 0.
  auto left = [&](double s) { return s <= 0.0 ? 0.0 : F(t - s) * R(s); };
  auto right = [&](double u) { return u <= 0.0 ? 0.0 : F(u) * R(t - u); };
  return tanh_sinh_integral(left, 0.0, half) + tanh_sinh_integral(right, 0.0, half);
}

double resolvent_identity_residual(const std::function<double(double)>& F, const std::function<double(double)>& R,
                                   std::span<const double> t_grid, ResolventConvention convention) {
  const double sign = convention == ResolventConvention::Plus ? 1.0 : -1.0;
  double worst = 0.0;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw DomainError("resolvent_identity_residual: grid must be positive");
    const double r = R(t) - F(t) - sign * convolve(F, R, t);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double integrate_kernel(const std::function<double(double)>& R, double T) {
  if (!(T > 0.0)) return 0.0;
  auto g = [&](double s) { return s <= 0.0 ? 0.0 : R(s); };
  double sum = tanh_sinh_integral(g, 0.0, std::min(T, 1.0));
  for (double a = 1.0; a < T; a *= 10.0) sum += integrate(g, a, std::min(T, 10.0 * a), 1e-12);
  return sum;
}

LTReport check_LT_assumption(const std::function<double(double)>& F, LTRole role, LTWindow window) {
  if (!(window.lo > 0.0 && window.hi > window.lo)) throw std::invalid_argument("check_LT: invalid window");
  LTReport rep;
  const double inf = std::numeric_limits<double>::infinity();

  // Power behaviour at the origin.
  {
    const auto ts = log_space(1e-8, 1e-6, 5);
    std::vector<double> lx, ly;
    for (double t : ts) {
      const double v = F(t);
      if (!(v > 0.0) || !std::isfinite(v)) {
        rep.status = LTStatus::Fail;
        rep.message = "kernel is not positive and finite near the origin";
        return rep;
      }
      lx.push_back(std::log(t));
      ly.push_back(std::log(v));
    }
    rep.origin_exponent = fit_line(lx, ly).slope;
  }

  // Tail: monotone samples, fitted log-log slope.
  const auto ts = log_space(window.lo, window.hi, 20);
  std::vector<double> lx, ly;
  double prev = inf;
  bool underflow = false;
  for (double t : ts) {
    const double v = F(t);
    if (!(v >= 0.0) || !std::isfinite(v) || v > prev * (1.0 + 1e-12)) {
      rep.status = LTStatus::Inconclusive;
      rep.message = "tail samples are not monotone nonincreasing";
      return rep;
    }
    prev = v;
    if (v == 0.0) {
      underflow = true;
      break;
    }
    lx.push_back(std::log(t));
    ly.push_back(std::log(v));
  }
  rep.tail_exponent = underflow || lx.size() < 2 ? -inf : fit_line(lx, ly).slope;

  constexpr double margin = 0.01;
  const bool l1_origin = rep.origin_exponent > -1.0 + margin;
  const bool l2_origin = 2.0 * rep.origin_exponent > -1.0 + margin;
  const bool l1_tail = rep.tail_exponent < -1.0 - margin;
  const bool l2_tail = 2.0 * rep.tail_exponent < -1.0 - margin;
  const double hi = window.hi;
  const double f_hi = F(hi);

  if (l1_origin && l1_tail) {
    const double tail = f_hi == 0.0 || std::isinf(rep.tail_exponent) ? 0.0 : f_hi * hi / (-rep.tail_exponent - 1.0);
    rep.l1_integral = integrate_kernel(F, hi) + tail;
  } else {
    rep.l1_integral = inf;
  }
  if (l2_origin && l2_tail) {
    const double tail =
        f_hi == 0.0 || std::isinf(rep.tail_exponent) ? 0.0 : f_hi * f_hi * hi / (-2.0 * rep.tail_exponent - 1.0);
    rep.l2_integral = integrate_kernel([&](double t) { const double v = F(t); return v * v; }, hi) + tail;
  } else {
    rep.l2_integral = inf;
  }

  const bool ok = role == LTRole::Drift ? std::isfinite(rep.l1_integral) : std::isfinite(rep.l2_integral);
  rep.status = ok ? LTStatus::Pass : LTStatus::Fail;
  std::ostringstream msg;
  msg << (role == LTRole::Drift ? "L1" : "L2") << (ok ? " integrable" : " not integrable")
      << " (origin exponent " << rep.origin_exponent << ", tail exponent " << rep.tail_exponent << ")";
  rep.message = msg.str();
  return rep;
}

LTReport check_LT_assumption(const Kernel& k, LTRole role, LTWindow window) {
  return check_LT_assumption([&k](double t) { return k(t); }, role, window);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_critical_value(std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return 1.358 * std::sqrt((dn + dm) / (dn * dm));
}

double LongRunReport::moment_ratio(double burn_in_time) const {
  double base = -1.0, worst = 0.0;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    if (checkpoints[k] < burn_in_time - 1e-12) continue;
    if (base < 0.0) base = second_moment[k];
    worst = std::max(worst, second_moment[k]);
  }
  if (base <= 0.0) return worst > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  return worst / base;
}

const KSRow* LongRunReport::find_ks(double t1, double t2) const {
  for (const auto& row : ks)
    if (std::abs(row.t1 - t1) < 1e-9 && std::abs(row.t2 - t2) < 1e-9) return &row;
  return nullptr;
}

LongRunReport long_run(const LongRunConfig& cfg) {
  SimGrid grid{cfg.T_long, cfg.N};
  grid.validate();
  if (cfg.paths < 2) throw std::invalid_argument("long_run: need at least 2 paths");
  const double h = grid.h();

  LongRunReport rep;
  rep.lt_b = check_LT_assumption(cfg.k_b, LTRole::Drift);
  rep.lt_sigma = check_LT_assumption(cfg.k_sigma, LTRole::Diffusion);
  if (rep.lt_b.status != LTStatus::Pass || rep.lt_sigma.status != LTStatus::Pass) {
    rep.failed = true;
    rep.message = "kernels do not satisfy the long-time integrability check: drift " + rep.lt_b.message +
                  "; diffusion " + rep.lt_sigma.message;
    return rep;
  }

  auto index_of = [&](double t) {
    const double r = t / h;
    const auto idx = static_cast<std::size_t>(std::llround(r));
    if (std::abs(r - static_cast<double>(idx)) > 1e-6 || idx > cfg.N)
      throw std::invalid_argument("long_run: time not on the simulation grid");
    return idx;
  };
  std::vector<std::size_t> cp_index;
  for (double t : cfg.checkpoints) cp_index.push_back(index_of(t));
  if (!std::is_sorted(cp_index.begin(), cp_index.end()) ||
      std::adjacent_find(cp_index.begin(), cp_index.end()) != cp_index.end())
    throw std::invalid_argument("long_run: checkpoints must be strictly increasing");
  const bool probe = cfg.restart_span > 0.0;
  const std::size_t restart_index = probe ? index_of(cfg.restart_from) : 0;
  const std::size_t restart_steps = probe ? index_of(cfg.restart_span) : 0;

  auto atoms_b = std::make_shared<const DiscreteLiftMeasure>(discretize(cfg.k_b, cfg.partition));
  auto atoms_s = std::make_shared<const DiscreteLiftMeasure>(discretize(cfg.k_sigma, cfg.partition));
  const Stepper stepper(*atoms_b, *atoms_s, h);
  const LiftedState s0 = initial_lift(cfg.x0, atoms_b, atoms_s);

  const std::size_t n_cp = cp_index.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> xa(cfg.paths, std::vector<double>(n_cp, nan));
  std::vector<std::vector<double>> xb(cfg.paths, std::vector<double>(n_cp, nan));
  std::vector<double> restart_end(cfg.paths, nan);
  std::vector<char> exploded(cfg.paths, 0);

  // Runs one path with its own generator; records checkpoints and optionally the state at `keep_index`.
  auto run = [&](std::uint64_t seed, std::vector<double>& out, std::size_t keep_index, LiftedState* kept) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(h));
    LiftedState s = s0;
    std::size_t next_cp = 0;
    for (std::size_t m = 0; m <= cfg.N; ++m) {
      if (kept && m == keep_index) *kept = s;
      while (next_cp < n_cp && cp_index[next_cp] == m) out[next_cp++] = observable(s);
      if (m == cfg.N) break;
      stepper.step(s, static_cast<double>(m) * h, normal(rng), cfg.coeff);
    }
  };

  parallel_for(cfg.paths, cfg.threads, [&](std::size_t i) {
    try {
      run(derive_seed(cfg.seed, i), xa[i], 0, nullptr);
      LiftedState kept;
      run(derive_seed(cfg.seed, cfg.paths + i), xb[i], restart_index, probe ? &kept : nullptr);
      if (probe) {
        std::mt19937_64 rng(derive_seed(cfg.seed, 2 * cfg.paths + i));
        std::normal_distribution<double> normal(0.0, std::sqrt(h));
        for (std::size_t m = 0; m < restart_steps; ++m)
          stepper.step(kept, static_cast<double>(restart_index + m) * h, normal(rng), cfg.coeff);
        restart_end[i] = observable(kept);
      }
    } catch (const ExplosionError&) {
      exploded[i] = 1;
    }
  });

  rep.checkpoints = cfg.checkpoints;
  rep.samples.assign(n_cp, {});
  std::vector<std::vector<double>> samples_b(n_cp);
  std::vector<double> restart_samples;
  for (std::size_t i = 0; i < cfg.paths; ++i) {
    if (exploded[i]) {
      ++rep.exploded;
      continue;
    }
    for (std::size_t k = 0; k < n_cp; ++k) {
      rep.samples[k].push_back(xa[i][k]);
      samples_b[k].push_back(xb[i][k]);
    }
    if (probe) restart_samples.push_back(restart_end[i]);
  }
  if (static_cast<double>(rep.exploded) > 0.01 * static_cast<double>(cfg.paths)) {
    rep.failed = true;
    rep.message = std::to_string(rep.exploded) + " paths exploded (more than 1%)";
  }
  if (rep.samples.empty() || rep.samples.front().empty()) {
    rep.failed = true;
    return rep;
  }

  for (std::size_t k = 0; k < n_cp; ++k) {
    double s1 = 0.0, s2 = 0.0;
    for (double x : rep.samples[k]) {
      s1 += x;
      s2 += x * x;
    }
    const double n = static_cast<double>(rep.samples[k].size());
    rep.mean.push_back(s1 / n);
    rep.second_moment.push_back(s2 / n);
  }

  const double burn_in_time = cfg.burn_in * cfg.T_long;
  for (std::size_t a = 0; a < n_cp; ++a) {
    if (cfg.checkpoints[a] < burn_in_time - 1e-12) continue;
    for (std::size_t b = a + 1; b < n_cp; ++b) {
      KSRow row{cfg.checkpoints[a], cfg.checkpoints[b], ks_statistic(rep.samples[a], samples_b[b]),
                ks_critical_value(rep.samples[a].size(), samples_b[b].size())};
      rep.ks.push_back(row);
    }
  }
  if (probe) {
    // Compare the restarted ensemble with ensemble A at the restart checkpoint.
    const auto it = std::find(cp_index.begin(), cp_index.end(), restart_index);
    if (it != cp_index.end()) {
      const auto& ref = rep.samples[static_cast<std::size_t>(it - cp_index.begin())];
      rep.restart = KSRow{cfg.restart_from, cfg.restart_from + cfg.restart_span, ks_statistic(ref, restart_samples),
                          ks_critical_value(ref.size(), restart_samples.size())};
    }
  }
  return rep;
}

}  // namespace svlift
