// Acceptance runner: `acceptance N` checks criterion N, no argument checks all nine.
// Every threshold below is fixed here; nothing is read from the environment.

#include "svlift/invariant.h"
#include "svlift/ito_verifier.h"
#include "svlift/lifted_sde.h"
#include "svlift/mittag_leffler.h"
#include "svlift/numerics.h"
#include "svlift/parallel.h"
#include "svlift/quadrature.h"
#include "svlift/registry.h"
#include "svlift/volterra_reference.h"
#include "svlift/weighted_sobolev.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace svlift;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << "\n    [" << (ok ? "ok" : "FAIL") << "] " << what;
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Coefficients mean_revert_bounded_sin(double kappa, double a) {
  auto drift = registry_coefficients("mean_revert", parse_config("kappa = " + std::to_string(kappa)));
  auto diffusion = registry_coefficients("bounded_sin", parse_config("a = " + std::to_string(a)));
  return make_coefficients(drift, diffusion);
}

Coefficients from_functions(std::function<double(double)> b, std::function<double(double)> s, double c_lg,
                            std::optional<double> lip) {
  Coefficients c;
  c.b = [b](double, double x) { return b(x); };
  c.sigma = [s](double, double x) { return s(x); };
  c.c_lg = c_lg;
  c.lipschitz = lip;
  return c;
}

const Kernel kExpSum = Kernel::exp_sum({{1.0, 0.5}, {0.5, 2.0}});

// 1. Kernel-measure round trip.
void criterion_1(Outcome& o) {
  const Kernel frac = Kernel::fractional(0.7);
  const std::vector<Kernel> catalog{kExpSum,
                                    Kernel::exp_sum({{2.0, 0.0}, {0.3, 7.0}}),
                                    frac,
                                    Kernel::fractional(0.3),
                                    Kernel::gamma(0.7, 2.0),
                                    Kernel::gamma(0.3, 1.0),
                                    Kernel::damped(frac, 1.0),
                                    Kernel::shifted(frac, 1.0),
                                    Kernel::shifted(Kernel::gamma(0.6, 1.0), 0.2)};
  const auto grid = log_space(0.01, 10.0, 60);
  for (const auto& k : catalog) {
    const auto m = lift_measure(k);
    const double tol = m.is_atomic() ? 1e-14 : 1e-6;
    double worst = 0.0;
    for (double t : grid) worst = std::max(worst, std::abs(laplace_of_measure(m, t).value - k(t)) / k(t));
    o.check(worst <= tol, k.describe() + ": max rel err " + num(worst) + " (tol " + num(tol) + ")");
  }
}

// 2. Lift against the direct convolution scheme.
void criterion_2(Outcome& o) {
  const Coefficients c = mean_revert_bounded_sin(1.0, 0.5);
  const double x0 = 1.0, T = 1.0;
  {
    const auto atoms = discretize(kExpSum);
    const std::vector<std::size_t> sweep{1000, 2000, 4000};
    const std::size_t paths = 50;
    std::vector<double> sup(sweep.size(), 0.0);
    double scale = 0.0;
    std::vector<ConvolutionWeights> weights;
    for (std::size_t n : sweep) weights.push_back(ConvolutionWeights::build(kExpSum, kExpSum, SimGrid{T, n}));
    const auto s0 = initial_lift(x0, atoms, atoms);
    for (std::size_t i = 0; i < paths; ++i) {
      BrownianPath w = BrownianPath::generate(derive_seed(2002, i), sweep.back(), T / sweep.back());
      for (std::size_t l = sweep.size(); l-- > 0;) {
        while (w.increments.size() > sweep[l]) w = w.coarsen();
        const auto lift = simulate_path(s0, c, w);
        const auto direct = direct_euler(weights[l], c, x0, w);
        sup[l] += compare_paths(lift.X, direct).sup_abs / paths;
        if (l + 1 == sweep.size()) scale += path_scale(direct) / paths;
      }
    }
    for (std::size_t l = 1; l < sweep.size(); ++l) {
      const double ratio = sup[l - 1] / sup[l];
      o.check(ratio >= 1.7, "exp-sum N " + std::to_string(sweep[l - 1]) + "->" + std::to_string(sweep[l]) +
                                ": mean sup diff " + num(sup[l - 1]) + " -> " + num(sup[l]) + ", ratio " + num(ratio) +
                                " (>= 1.7)");
    }
    o.check(sup.back() < 1e-3 * scale,
            "exp-sum N=4000: mean sup diff " + num(sup.back()) + " vs 1e-3 * path scale " + num(1e-3 * scale));
  }
  {
    const Kernel frac = Kernel::fractional(0.7);
    const auto atoms = discretize(frac);
    const SimGrid g{T, 2000};
    const std::size_t paths = 100;
    const auto weights = ConvolutionWeights::build(frac, frac, g);
    const auto s0 = initial_lift(x0, atoms, atoms);
    double rel = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
      const auto w = BrownianPath::generate(derive_seed(2003, i), g.N, g.h());
      const auto direct = direct_euler(weights, c, x0, w);
      rel += compare_paths(simulate_path(s0, c, w).X, direct).rms / path_scale(direct) / paths;
    }
    o.check(rel < 0.05, "fractional 0.7, n=" + std::to_string(atoms.size()) + " atoms, N=2000: mean rms / scale " +
                            num(rel) + " (< 0.05)");
  }
}

// 3. Deterministic fractional benchmark.
void criterion_3(Outcome& o) {
  const double alpha = 0.7, lambda = 0.5, x0 = 1.0, T = 1.0;
  PartitionSpec p;
  p.n_cells = 200;
  const auto atoms = discretize(Kernel::fractional(alpha), p);
  const auto c = from_functions([=](double x) { return lambda * x; }, [](double) { return 0.0; }, lambda, lambda);
  const SimGrid g{T, 4000};
  const auto path = simulate_path(initial_lift(x0, atoms, atoms), c, g, BrownianPath::generate(1, g.N, g.h()));
  const double exact = x0 * mittag_leffler(alpha, 1.0, lambda * std::pow(T, alpha));
  const double rel = std::abs(path.X.back() - exact) / exact;
  o.check(rel < 1e-2, "X_T " + num(path.X.back()) + " vs E_a(lambda T^a) " + num(exact) + ": rel err " + num(rel) +
                          " (< 1e-2)");
  const auto picard = picard_solve_deterministic(c, x0, atoms, g);
  double sup = 0.0;
  for (std::size_t m = 0; m < picard.X.size(); ++m) sup = std::max(sup, std::abs(picard.X[m] - path.X[m]));
  o.check(sup < 1e-6, "Picard (" + std::to_string(picard.iterations) + " iterations) vs stepper: sup diff " + num(sup) +
                          " (< 1e-6)");
}

// 4. Semigroup decay exponents.
void criterion_4(Outcome& o) {
  const double alpha = 0.7, eps = 0.05, eps_tilde = 0.1;
  WeightFamily w;
  w.eta = -eps;
  w.order = 1;
  const auto dict = standard_dictionary();
  const auto t = log_space(1e-4, 1e-1, 24);
  const auto frac = semigroup_decay_fit(discretize(Kernel::fractional(alpha)), w, t, dict);
  const double target = 1.0 - alpha + eps_tilde - eps;
  o.check(std::abs(frac.gamma_hat - target) < 0.1,
          "fractional 0.7: gamma_hat " + num(frac.gamma_hat) + " vs " + num(target) + " (within 0.1)");
  const auto es = semigroup_decay_fit(discretize(kExpSum), w, t, dict);
  o.check(std::abs(es.gamma_hat) < 0.1, "exp-sum: gamma_hat " + num(es.gamma_hat) + " (|.| < 0.1)");
}

// 5. Ito formula.
void criterion_5(Outcome& o) {
  const auto atoms = discretize(kExpSum);
  {
    const Coefficients c = mean_revert_bounded_sin(1.0, 0.5);
    const std::vector<std::size_t> sweep{500, 1000, 2000, 4000};
    const std::size_t paths = 20;
    std::vector<double> mean_abs;
    SimulateOptions so;
    so.record_factors = true;
    for (std::size_t n : sweep) {
      const SimGrid g{1.0, n};
      double acc = 0.0;
      for (std::size_t i = 0; i < paths; ++i) {
        const auto w = BrownianPath::generate(derive_seed(5005, i), n, g.h());
        const auto run = simulate_path(initial_lift(1.0, atoms, atoms), c, g, w, so);
        acc += std::abs(ito_residual(SmoothObservable::identity(), run, w, atoms, atoms, c, 0, n));
      }
      mean_abs.push_back(acc / paths);
    }
    for (std::size_t l = 1; l < sweep.size(); ++l) {
      const double ratio = mean_abs[l - 1] / mean_abs[l];
      o.check(ratio >= 1.7, "f=x, N " + std::to_string(sweep[l - 1]) + "->" + std::to_string(sweep[l]) +
                                ": mean |residual| " + num(mean_abs[l - 1]) + " -> " + num(mean_abs[l]) + ", ratio " +
                                num(ratio) + " (>= 1.7)");
    }
  }
  {
    const double s = 0.5, x0 = 0.0;
    const auto c = from_functions([](double) { return 0.0; }, [=](double) { return s; }, s, 0.0);
    const SimGrid g{1.0, 500};
    const std::size_t paths = 10000;
    std::vector<double> residual(paths), xt(paths);
    SimulateOptions so;
    so.record_factors = true;
    parallel_for(paths, 0, [&](std::size_t i) {
      const auto w = BrownianPath::generate(derive_seed(5006, i), g.N, g.h());
      const auto run = simulate_path(initial_lift(x0, atoms, atoms), c, g, w, so);
      residual[i] = ito_residual(SmoothObservable::square(), run, w, atoms, atoms, c, 0, g.N);
      xt[i] = run.X.back();
    });
    const double n = static_cast<double>(paths);
    double mean = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
      mean += residual[i] / n;
      mx += xt[i] / n;
    }
    double var_r = 0.0, var_x = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
      var_r += (residual[i] - mean) * (residual[i] - mean) / (n - 1.0);
      var_x += (xt[i] - mx) * (xt[i] - mx) / (n - 1.0);
    }
    const double z = mean / std::sqrt(var_r / n);
    o.check(std::abs(z) < 3.0, "f=x^2, b=0, sigma=0.5, 1e4 paths: mean residual " + num(mean) + ", z " + num(z) +
                                   " (|z| < 3)");
    const double k2 = integrate([](double u) { return kExpSum(u) * kExpSum(u); }, 0.0, 1.0, 1e-14);
    const double target = s * s * k2;
    const double se = target * std::sqrt(2.0 / (n - 1.0));
    o.check(std::abs(var_x - target) < 3.0 * se, "sample variance " + num(var_x) + " vs s^2 int k^2 " + num(target) +
                                                     " (within 3 SE = " + num(3.0 * se) + ")");
  }
}

// 6. Mittag-Leffler identities and resolvents.
void criterion_6(Outcome& o) {
  double e_exp = 0.0, e_cos = 0.0;
  for (double z : lin_space(-5.0, 5.0, 201)) {
    e_exp = std::max(e_exp, std::abs(mittag_leffler(1.0, 1.0, z) - std::exp(z)) / std::max(1.0, std::exp(z)));
    e_cos = std::max(e_cos, std::abs(mittag_leffler(2.0, 1.0, -z * z) - std::cos(z)));
  }
  o.check(e_exp < 1e-10, "E_{1,1} = exp on [-5,5]: max err " + num(e_exp) + " (< 1e-10)");
  o.check(e_cos < 1e-10, "E_{2,1}(-z^2) = cos z on [-5,5]: max err " + num(e_cos) + " (< 1e-10)");

  const double lambda = 0.7;
  const auto fine = lin_space(5.0 / 4096.0, 5.0, 4096);
  const double r_const = resolvent_identity_residual([=](double) { return lambda; },
                                                     [=](double t) { return lambda * std::exp(lambda * t); }, fine,
                                                     ResolventConvention::Plus);
  o.check(r_const < 1e-6, "constant kernel, R = F + F*R at 4096 points: residual " + num(r_const) + " (< 1e-6)");

  const double delta = 1.0, beta = 0.3;
  const Kernel F = Kernel::gamma(beta, delta);
  auto Fk = [&](double t) { return F(t); };
  auto R = [&](double t) { return gamma_resolvent(delta, beta, t); };
  const auto grid = lin_space(0.01, 5.0, 100);
  const double plus = resolvent_identity_residual(Fk, R, grid, ResolventConvention::Plus);
  const double minus = resolvent_identity_residual(Fk, R, grid, ResolventConvention::Minus);
  o.check(plus < 1e-3, "gamma kernel (delta=1, beta=0.3), R = F + F*R on [0.01,5]: residual " + num(plus) +
                           " (< 1e-3); for reference R = F - F*R gives " + num(minus));

  const double i10 = integrate_kernel(R, 10.0), i100 = integrate_kernel(R, 100.0);
  const double change = std::abs(i100 - i10) / std::abs(i100);
  o.check(change < 0.01, "int_0^T R: T=10 " + num(i10) + ", T=100 " + num(i100) + ", rel change " + num(change) +
                             " (< 1%)");
}

// 7. Invariant-measure evidence.
void criterion_7(Outcome& o) {
  LongRunConfig cfg;
  cfg.k_b = Kernel::gamma(0.3, 1.0);
  cfg.k_sigma = Kernel::gamma(0.7, 1.0);
  cfg.coeff = from_functions([](double x) { return -x; }, [](double) { return 0.5; }, 1.0, 1.0);
  cfg.x0 = 0.0;
  cfg.T_long = 50.0;
  cfg.N = 5000;
  cfg.paths = 2000;
  cfg.seed = 7007;
  cfg.burn_in = 0.2;
  cfg.threads = 0;
  for (double t = 10.0; t <= 50.0 + 1e-9; t += 5.0) cfg.checkpoints.push_back(t);
  const auto rep = long_run(cfg);
  o.check(!rep.failed, "long run completed (" + std::to_string(rep.exploded) + " explosions)" +
                           (rep.message.empty() ? "" : ": " + rep.message));
  if (rep.failed) return;
  const double ratio = rep.moment_ratio(cfg.burn_in * cfg.T_long);
  o.check(ratio <= 2.0, "max E|X_t|^2 / post-burn-in baseline " + num(ratio) + " (<= 2)");
  const KSRow* ks = rep.find_ks(25.0, 50.0);
  o.check(ks && ks->statistic < ks->critical,
          ks ? "KS(25, 50) " + num(ks->statistic) + " vs critical " + num(ks->critical) : std::string("KS row missing"));
}

// 8. Lyapunov criterion.
void criterion_8(Outcome& o) {
  const Kernel kb = Kernel::gamma(0.6, 1.0), ks = Kernel::gamma(0.7, 1.0);
  const auto domain = lin_space(-1000.0, 1000.0, 401);
  const auto lags = log_space(1e-3, 10.0, 50);
  const auto good = lyapunov_check(SmoothObservable::square(), kb, ks, mean_revert_bounded_sin(1.0, 0.5), domain, lags);
  o.check(good.passed && std::isfinite(good.h_est) && std::isfinite(good.d_est),
          "V=x^2, mean-reverting drift, bounded sigma: " + good.message + ", h " + num(good.h_est) + ", d " +
              num(good.d_est));
  const auto cubic = from_functions([](double x) { return x * x * x; }, [](double) { return 0.5; },
                                    std::numeric_limits<double>::infinity(), std::nullopt);
  const auto bad = lyapunov_check(SmoothObservable::square(), kb, ks, cubic, domain, lags);
  o.check(!bad.passed && bad.witness.has_value(),
          "cubic drift: " + bad.message +
              (bad.witness ? ", witness x=" + num(bad.witness->x) + " lag=" + num(bad.witness->lag) : std::string()));
}

// 9. Flow property.
void criterion_9(Outcome& o) {
  std::mt19937_64 rng(9009);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int identical = 0;
  const int trials = 20;
  for (int k = 0; k < trials; ++k) {
    std::vector<Kernel> choices{kExpSum, Kernel::fractional(0.3 + 0.6 * U(rng)), Kernel::gamma(0.3 + 0.6 * U(rng), 1.0),
                                Kernel::shifted(Kernel::fractional(0.5), 0.5)};
    const Kernel kb = choices[rng() % choices.size()], ks = choices[rng() % choices.size()];
    PartitionSpec p;
    p.n_cells = 20 + rng() % 100;
    const auto ab = discretize(kb, p), as = discretize(ks, p);
    const double kappa = 0.2 + 2.0 * U(rng), a = 0.1 + U(rng);
    const auto c = mean_revert_bounded_sin(kappa, a);
    const std::size_t N = 50 + rng() % 400;
    const std::size_t split = 1 + rng() % (N - 1);
    const auto w = BrownianPath::generate(rng(), N, (0.5 + U(rng)) / static_cast<double>(N));
    const auto s0 = initial_lift(2.0 * U(rng) - 1.0, ab, as);
    const auto straight = simulate_path(s0, c, w);
    const auto first = simulate_path(s0, c, w.slice(0, split));
    SimulateOptions so;
    so.start_step = split;
    const auto second = simulate_path(first.final_state, c, w.slice(split, N - split), so);
    const bool same = second.X.size() == N - split + 1 &&
                      std::memcmp(&straight.X[split], second.X.data(), sizeof(double) * second.X.size()) == 0 &&
                      straight.final_state.y_b == second.final_state.y_b &&
                      straight.final_state.y_sigma == second.final_state.y_sigma;
    identical += same;
  }
  o.check(identical == trials, std::to_string(identical) + "/" + std::to_string(trials) +
                                   " split runs bitwise equal to the straight run");
}

struct Criterion {
  const char* title;
  void (*run)(Outcome&);
  double budget_s;
};

const Criterion kCriteria[] = {
    {"kernel-measure round trip", criterion_1, 10},   {"lift vs direct solver", criterion_2, 300},
    {"deterministic fractional benchmark", criterion_3, 30}, {"semigroup decay exponents", criterion_4, 60},
    {"Ito formula", criterion_5, 180},                 {"Mittag-Leffler and resolvents", criterion_6, 60},
    {"invariant-measure evidence", criterion_7, 600},  {"Lyapunov criterion", criterion_8, 10},
    {"flow property", criterion_9, 30}};

bool run_one(int n) {
  const Criterion& c = kCriteria[n - 1];
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < c.budget_s, "runtime " + num(secs) + " s (< " + num(c.budget_s) + " s)");
  std::printf("criterion %d: %s  %s%s\n", n, o.pass ? "PASS" : "FAIL", c.title, o.detail.str().c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 2) {
    std::fprintf(stderr, "usage: acceptance [1-9]\n");
    return 2;
  }
  if (argc == 2) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > 9) {
      std::fprintf(stderr, "criterion must be 1..9\n");
      return 2;
    }
    return run_one(n) ? 0 : 1;
  }
  int failed = 0;
  for (int n = 1; n <= 9; ++n) failed += !run_one(n);
  return failed == 0 ? 0 : 1;
}
