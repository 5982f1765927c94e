#include "svlift/lifted_sde.h"

#include "svlift/errors.h"
#include "svlift/numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svlift {

double linear_growth_ratio(const Coefficients& c, const std::vector<double>& x_grid, const std::vector<double>& t_grid) {
  double worst = 0.0;
  for (double t : t_grid) {
    for (double x : x_grid) {
      const double m = std::max(std::abs(c.b(t, x)), std::abs(c.sigma(t, x)));
      const double bound = c.c_lg * (1.0 + std::abs(x));
      if (m == 0.0) continue;
      worst = std::max(worst, bound > 0.0 ? m / bound : std::numeric_limits<double>::infinity());
    }
  }
  return worst;
}

LiftedState initial_lift(double x0, std::shared_ptr<const DiscreteLiftMeasure> atoms_b,
                         std::shared_ptr<const DiscreteLiftMeasure> atoms_sigma) {
  LiftedState s;
  s.y_b.assign(atoms_b->size(), 0.0);
  s.y_sigma.assign(atoms_sigma->size(), 0.0);
  s.atoms_b = std::move(atoms_b);
  s.atoms_sigma = std::move(atoms_sigma);
  s.y0 = x0;
  return s;
}

LiftedState initial_lift(double x0, const DiscreteLiftMeasure& atoms_b, const DiscreteLiftMeasure& atoms_sigma) {
  return initial_lift(x0, std::make_shared<const DiscreteLiftMeasure>(atoms_b),
                      std::make_shared<const DiscreteLiftMeasure>(atoms_sigma));
}

double observable(const LiftedState& s) {
  double sb = 0.0, ss = 0.0;
  for (double y : s.y_b) sb += y;
  for (double y : s.y_sigma) ss += y;
  const double x = s.y0 + sb + ss;
  if (!std::isfinite(x)) throw DomainError("observable: non-finite factor value");
  return x;
}

Stepper::Stepper(const DiscreteLiftMeasure& atoms_b, const DiscreteLiftMeasure& atoms_sigma, double h,
                 SchemeOptions opts)
    : h_(h), opts_(opts) {
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  for (const auto& a : atoms_b.atoms) {
    const double decay = std::exp(-a.node * h);
    decay_b_.push_back(decay);
    drift_w_.push_back(opts.drift == DriftWeight::Phi1 ? a.mass * phi1(a.node * h) * h : a.mass * h * decay);
  }
  for (const auto& a : atoms_sigma.atoms) {
    const double decay = std::exp(-a.node * h);
    decay_s_.push_back(decay);
    noise_w_.push_back(opts.noise == NoiseWeight::FullStep ? a.mass * decay : a.mass * std::exp(-a.node * h / 2.0));
  }
}

void Stepper::step(LiftedState& s, double t, double dW, const Coefficients& c) const {
  if (s.y_b.size() != decay_b_.size() || s.y_sigma.size() != decay_s_.size())
    throw std::invalid_argument("step: state does not match the stepper's atoms");
  const double x = observable(s);
  const double drift = c.b(t, x);
  const double diffusion = c.sigma(t, x) * dW;
  bool blown = !std::isfinite(drift) || !std::isfinite(diffusion);
  for (std::size_t i = 0; i < s.y_b.size(); ++i) {
    s.y_b[i] = decay_b_[i] * s.y_b[i] + drift_w_[i] * drift;
    blown = blown || !(std::abs(s.y_b[i]) <= opts_.explosion_threshold);
  }
  for (std::size_t i = 0; i < s.y_sigma.size(); ++i) {
    s.y_sigma[i] = decay_s_[i] * s.y_sigma[i] + noise_w_[i] * diffusion;
    blown = blown || !(std::abs(s.y_sigma[i]) <= opts_.explosion_threshold);
  }
  if (blown) throw ExplosionError("factor values exceeded the explosion threshold", t + h_);
}

LiftedState exp_euler_step(const LiftedState& s, double t, double h, double dW, const Coefficients& c,
                           SchemeOptions opts) {
  Stepper stepper(*s.atoms_b, *s.atoms_sigma, h, opts);
  LiftedState next = s;
  stepper.step(next, t, dW, c);
  return next;
}

PathSample simulate_path(const LiftedState& s0, const Coefficients& c, const BrownianPath& w,
                         const SimulateOptions& opts) {
  const double h = w.h;
  Stepper stepper(*s0.atoms_b, *s0.atoms_sigma, h, opts.scheme);
  PathSample out;
  out.h = h;
  out.start_step = opts.start_step;
  out.y0 = s0.y0;
  const std::size_t n = w.increments.size();
  out.t.reserve(n + 1);
  out.X.reserve(n + 1);
  LiftedState s = s0;
  auto record = [&](std::size_t m) {
    out.t.push_back(static_cast<double>(opts.start_step + m) * h);
    out.X.push_back(observable(s));
    if (opts.record_factors) {
      out.y_b.push_back(s.y_b);
      out.y_sigma.push_back(s.y_sigma);
    }
  };
  record(0);
  for (std::size_t m = 0; m < n; ++m) {
    const double t = static_cast<double>(opts.start_step + m) * h;
    try {
      stepper.step(s, t, w.increments[m], c);
    } catch (const ExplosionError& e) {
      out.explosion_time = e.time();
      out.final_state = s;
      return out;
    }
    record(m + 1);
  }
  out.final_state = std::move(s);
  return out;
}

PathSample simulate_path(const LiftedState& s0, const Coefficients& c, const SimGrid& g, const BrownianPath& w,
                         const SimulateOptions& opts) {
  g.validate();
  if (w.increments.size() != g.N) throw std::invalid_argument("simulate_path: Brownian path length does not match N");
  if (std::abs(w.h - g.h()) > 1e-12 * g.h()) throw std::invalid_argument("simulate_path: Brownian step mismatch");
  return simulate_path(s0, c, w, opts);
}

LipschitzEnvelope::LipschitzEnvelope(std::function<double(double)> f, double c_lg, double k)
    : f_(std::move(f)), c_lg_(c_lg), k_(k) {
  if (!(k > 0.0)) throw std::invalid_argument("lipschitz_envelope: k must be positive");
  if (!(c_lg >= 0.0)) throw std::invalid_argument("lipschitz_envelope: growth constant must be nonnegative");
}

double LipschitzEnvelope::operator()(double x) const {
  constexpr int kSamples = 2000;
  double radius = 2.0 * (std::abs(f_(x)) + c_lg_ * (1.0 + std::abs(x))) / k_;
  if (radius == 0.0) return f_(x);
  for (int attempt = 0; attempt < 6; ++attempt, radius *= 2.0) {
    auto objective = [&](double y) { return f_(y) + k_ * std::abs(x - y); };
    double best_y = x, best = objective(x);
    int best_index = kSamples / 2;
    for (int i = 0; i <= kSamples; ++i) {
      const double y = x - radius + 2.0 * radius * i / kSamples;
      const double v = objective(y);
      if (v < best) {
        best = v;
        best_y = y;
        best_index = i;
      }
    }
    if (best_index == 0 || best_index == kSamples) continue;
    // Refine around the coarse minimizer.
    double step = 2.0 * radius / kSamples;
    for (int pass = 0; pass < 4; ++pass) {
      const double centre = best_y;
      for (int i = -50; i <= 50; ++i) {
        const double y = centre + step * i / 50.0;
        const double v = objective(y);
        if (v < best) {
          best = v;
          best_y = y;
        }
      }
      step /= 50.0;
    }
    return best;
  }
  throw std::runtime_error("lipschitz_envelope: minimizer not found inside the widened window");
}

PicardResult picard_solve_deterministic(const Coefficients& c, double x0, const DiscreteLiftMeasure& atoms_b,
                                        const SimGrid& g, const PicardOptions& opts) {
  g.validate();
  if (!c.lipschitz || !std::isfinite(*c.lipschitz))
    throw std::invalid_argument("picard: a finite Lipschitz constant must be declared");
  for (double t : {0.0, g.T / 2.0, g.T})
    for (double x : {-10.0, -1.0, 0.0, 1.0, 10.0})
      if (c.sigma(t, x) != 0.0) throw std::invalid_argument("picard: sigma must vanish identically");

  const std::size_t n = g.N;
  const double h = g.h();
  // Lag weights: contribution of cell j to time index m depends only on L = m - 1 - j.
  std::vector<double> w_left(n, 0.0), w_right(n, 0.0);
  for (const auto& a : atoms_b.atoms) {
    const double z = a.node * h;
    const double p1 = phi1(z), p2 = phi2(z);
    for (std::size_t lag = 0; lag < n; ++lag) {
      const double decay = std::exp(-a.node * h * static_cast<double>(lag));
      if (decay == 0.0) break;
      if (opts.rule == PicardRule::PiecewiseConstant) {
        w_left[lag] += a.mass * decay * p1 * h;
      } else {
        w_left[lag] += a.mass * decay * p2 * h;
        w_right[lag] += a.mass * decay * (p1 - p2) * h;
      }
    }
  }

  PicardResult result;
  result.t = lin_space(0.0, g.T, n + 1);
  std::vector<double> X(n + 1, x0), next(n + 1), drift(n + 1);
  double previous_change = std::numeric_limits<double>::infinity();
  int growth_streak = 0;
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    for (std::size_t m = 0; m <= n; ++m) drift[m] = c.b(static_cast<double>(m) * h, X[m]);
    double change = 0.0;
    next[0] = x0;
    for (std::size_t m = 1; m <= n; ++m) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t lag = m - 1 - j;
        acc += w_left[lag] * drift[j];
        if (opts.rule == PicardRule::PiecewiseLinear) acc += w_right[lag] * drift[j + 1];
      }
      next[m] = x0 + acc;
      change = std::max(change, std::abs(next[m] - X[m]));
    }
    X.swap(next);
    result.iterations = it;
    result.last_change = change;
    if (!std::isfinite(change)) throw ContractionError("picard: iterates became non-finite; try a smaller horizon");
    if (change < opts.tolerance) break;
    growth_streak = change > previous_change ? growth_streak + 1 : 0;
    if (growth_streak >= 5)
      throw ContractionError("picard: update grew for 5 consecutive iterations; try a smaller horizon");
    previous_change = change;
  }
  result.X = std::move(X);
  return result;
}

}  // namespace svlift
