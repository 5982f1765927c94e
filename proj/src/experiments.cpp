#include "svlift/experiments.h"

#include "svlift/brownian.h"
#include "svlift/config.h"
#include "svlift/errors.h"
#include "svlift/invariant.h"
#include "svlift/ito_verifier.h"
#include "svlift/kernels.h"
#include "svlift/lifted_sde.h"
#include "svlift/numerics.h"
#include "svlift/parallel.h"
#include "svlift/quadrature.h"
#include "svlift/registry.h"
#include "svlift/volterra_reference.h"
#include "svlift/weighted_sobolev.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace svlift {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row_strings(header);
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    std::vector<std::string> parts{cell(cells)...};
    row_strings(parts);
  }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  void row_strings(const std::vector<std::string>& parts) {
    for (std::size_t i = 0; i < parts.size(); ++i) out_ << (i ? "," : "") << parts[i];
    out_ << '\n';
  }
  std::ofstream out_;
};

struct Context {
  const RunRequest& req;
  ConfigTable cfg;
  std::string raw;
  std::uint64_t seed = 0;
  fs::path out;
  std::ostream& log;
};

PartitionSpec partition_of(const Context& c) { return parse_partition(c.cfg.table("quadrature")); }

SimGrid grid_of(const Context& c) {
  const ConfigTable& g = c.cfg.require_table("grid");
  SimGrid grid{g.number("T"), g.count("N")};
  if (!(grid.T > 0.0)) throw ConfigError("grid.T must be positive", g.find("T")->line);
  return grid;
}

Coefficients coefficients_of(const Context& c) {
  const RegistryEntry drift = registry_coefficients(c.cfg.require_table("drift"));
  const RegistryEntry diffusion = registry_coefficients(c.cfg.require_table("diffusion"));
  return make_coefficients(drift, diffusion);
}

std::size_t paths_of(const Context& c) { return c.cfg.require_table("ensemble").count("paths"); }

// --- subcommands -----------------------------------------------------------------------------------------------

int kernel_info(Context& c) {
  const Kernel k = kernel_at(c.cfg, "kernel");
  const ConfigTable* t = c.cfg.table("table");
  const double t_min = t ? t->number_or("t_min", 0.01) : 0.01;
  const double t_max = t ? t->number_or("t_max", 10.0) : 10.0;
  const std::size_t n = t ? t->count_or("n", 50) : 50;
  const LiftMeasureSpec m = lift_measure(k);

  Csv table(c.out / "kernel.csv", {"t", "k_t", "laplace", "rel_err"});
  double worst = 0.0;
  for (double s : log_space(t_min, t_max, n)) {
    const double kt = k(s);
    const double lt = laplace_of_measure(m, s).value;
    const double rel = std::abs(lt - kt) / kt;
    worst = std::max(worst, rel);
    table.row(s, kt, lt, rel);
  }
  Csv meta(c.out / "measure.csv", {"key", "value"});
  meta.row("kernel", k.describe());
  meta.row("form", m.is_atomic() ? "atoms" : "density");
  meta.row("theta", fmt(m.theta));
  meta.row("tempered_mass", fmt(tempered_mass(m, m.support.hi)));
  meta.row("theta_stability", fmt(theta_stability(m, m.support.hi)));
  if (m.is_atomic()) {
    for (const auto& a : m.atoms()) meta.row("atom", fmt(a.node) + ":" + fmt(a.mass));
  } else {
    const auto& d = m.density();
    meta.row("amplitude", fmt(d.amplitude));
    meta.row("exponent", fmt(d.exponent));
    meta.row("edge", fmt(d.edge));
    meta.row("tilt", fmt(d.tilt));
  }
  c.log << "kernel-info: max relative Laplace round-trip error " << worst << "\n";
  return c.req.assert_mode && !(worst <= 1e-6) ? kExitAssert : kExitOk;
}

int discretize_cmd(Context& c) {
  const Kernel k = kernel_at(c.cfg, "kernel");
  const PartitionSpec p = partition_of(c);
  const ConfigTable* w = c.cfg.table("window");
  const double t_min = w ? w->number_or("t_min", 0.01) : 0.01;
  const double T = w ? w->number_or("T", 5.0) : 5.0;
  const std::size_t n = w ? w->count_or("n", 1000) : 1000;
  const double max_abs = w ? w->number_or("max_abs", 1e-2) : 1e-2;

  const DiscreteLiftMeasure d = discretize(k, p);
  {
    Csv atoms(c.out / "atoms.csv", {"x_i", "c_i"});
    for (const auto& a : d.atoms) atoms.row(a.node, a.mass);
  }
  const auto grid = log_space(t_min, T, n);
  Csv err(c.out / "error.csv", {"t", "k_t", "approx", "abs_err"});
  for (double t : grid) {
    const double kt = k(t), ap = d.kernel(t);
    err.row(t, kt, ap, std::abs(kt - ap));
  }
  const ApproxError e = kernel_approx_error(k, d, grid);
  c.log << "discretize: " << d.size() << " atoms, sup_abs " << e.sup_abs << ", sup_rel " << e.sup_rel
        << ", tail bound " << tail_bound(lift_measure(k), p, t_min) << "\n";
  return c.req.assert_mode && !(e.sup_abs < max_abs) ? kExitAssert : kExitOk;
}

int decay_fit(Context& c) {
  const Kernel k = kernel_at(c.cfg, "kernel");
  const DiscreteLiftMeasure d = discretize(k, partition_of(c));
  const ConfigTable* f = c.cfg.table("fit");
  const double eps = f ? f->number_or("eps", 0.05) : 0.05;
  const double eps_tilde = f ? f->number_or("eps_tilde", 0.1) : 0.1;
  const double t_min = f ? f->number_or("t_min", 1e-4) : 1e-4;
  const double t_max = f ? f->number_or("t_max", 0.1) : 0.1;
  const std::size_t n = f ? f->count_or("n", 24) : 24;
  WeightFamily w;
  w.eta = -eps;
  w.order = 1;
  if (const ConfigTable* wt = c.cfg.table("weight")) {
    w.eta = wt->number_or("eta", w.eta);
    w.offset = wt->number_or("offset", w.offset);
    w.slope = wt->number_or("slope", w.slope);
  }
  const Dictionary dict = standard_dictionary();
  const auto ts = log_space(t_min, t_max, n);
  const DecayFit fit = semigroup_decay_fit(d, w, ts, dict);

  double alpha = 0.0;
  if (!k.bounded_at_zero()) alpha = k.is_wrapper() ? k.base()->alpha() : k.alpha();
  const double theory = k.bounded_at_zero() ? 0.0 : 1.0 - alpha + eps_tilde - eps;
  {
    Csv out(c.out / "decay.csv", {"t", "dual_norm", "fit_line"});
    for (std::size_t i = 0; i < ts.size(); ++i)
      out.row(ts[i], fit.dual_norm[i], std::exp(fit.intercept - fit.gamma_hat * std::log(ts[i])));
  }
  const double diff = std::abs(fit.gamma_hat - theory);
  Csv summary(c.out / "summary.csv", {"gamma_hat", "gamma_theory", "abs_diff"});
  summary.row(fit.gamma_hat, theory, diff);
  c.log << "decay-fit: gamma_hat " << fit.gamma_hat << " (theory " << theory << ")\n";
  return c.req.assert_mode && !(diff < 0.1) ? kExitAssert : kExitOk;
}

int simulate(Context& c) {
  const Kernel kb = kernel_at(c.cfg, "kernel_b"), ks = kernel_at(c.cfg, "kernel_sigma");
  const PartitionSpec p = partition_of(c);
  const SimGrid g = grid_of(c);
  const std::size_t paths = paths_of(c);
  const Coefficients coeff = coefficients_of(c);
  const double x0 = c.cfg.number_or("x0", 1.0);
  const bool snapshots = c.cfg.boolean_or("snapshots", false);

  auto ab = std::make_shared<const DiscreteLiftMeasure>(discretize(kb, p));
  auto as = std::make_shared<const DiscreteLiftMeasure>(discretize(ks, p));
  const LiftedState s0 = initial_lift(x0, ab, as);
  std::vector<PathSample> runs(paths);
  SimulateOptions opts;
  opts.record_factors = snapshots;
  parallel_for(paths, c.req.threads, [&](std::size_t i) {
    const BrownianPath w = BrownianPath::generate(derive_seed(c.seed, i), g.N, g.h());
    runs[i] = simulate_path(s0, coeff, g, w, opts);
  });

  Csv out(c.out / "paths.csv", {"path_index", "t", "X"});
  for (std::size_t i = 0; i < paths; ++i)
    for (std::size_t m = 0; m < runs[i].X.size(); ++m) out.row(i, runs[i].t[m], runs[i].X[m]);
  if (snapshots) {
    Csv f(c.out / "factors.csv", {"path_index", "t", "family", "index", "y"});
    for (std::size_t i = 0; i < paths; ++i)
      for (std::size_t m = 0; m < runs[i].y_b.size(); ++m) {
        for (std::size_t j = 0; j < runs[i].y_b[m].size(); ++j) f.row(i, runs[i].t[m], "b", j, runs[i].y_b[m][j]);
        for (std::size_t j = 0; j < runs[i].y_sigma[m].size(); ++j)
          f.row(i, runs[i].t[m], "sigma", j, runs[i].y_sigma[m][j]);
      }
  }
  std::size_t exploded = 0;
  for (const auto& r : runs) exploded += r.explosion_time.has_value();
  if (exploded) {
    const fs::path report = c.out / "explosion.csv";
    Csv e(report, {"path_index", "time"});
    for (std::size_t i = 0; i < paths; ++i)
      if (runs[i].explosion_time) e.row(i, *runs[i].explosion_time);
    c.log << "simulate: " << exploded << " path(s) exploded; report at " << report.string() << "\n";
    return kExitRuntime;
  }
  c.log << "simulate: " << paths << " paths, " << ab->size() << "+" << as->size() << " factors\n";
  return kExitOk;
}

int compare(Context& c) {
  const Kernel kb = kernel_at(c.cfg, "kernel_b"), ks = kernel_at(c.cfg, "kernel_sigma");
  const PartitionSpec p = partition_of(c);
  const ConfigTable& gt = c.cfg.require_table("grid");
  const double T = gt.number("T");
  std::vector<std::size_t> sweep;
  for (double n : gt.numbers("N")) {
    if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("grid.N entries must be positive integers", gt.find("N")->line);
    sweep.push_back(static_cast<std::size_t>(n));
  }
  std::sort(sweep.begin(), sweep.end());
  const std::size_t finest = sweep.back();
  for (std::size_t n : sweep) {
    std::size_t r = finest / n;
    if (finest % n != 0 || (r & (r - 1)) != 0)
      throw ConfigError("grid.N entries must differ by powers of two", gt.find("N")->line);
  }
  const std::size_t paths = paths_of(c);
  const Coefficients coeff = coefficients_of(c);
  const double x0 = c.cfg.number_or("x0", 1.0);

  auto ab = std::make_shared<const DiscreteLiftMeasure>(discretize(kb, p));
  auto as = std::make_shared<const DiscreteLiftMeasure>(discretize(ks, p));
  const LiftedState s0 = initial_lift(x0, ab, as);

  std::vector<ConvolutionWeights> weights;
  for (std::size_t n : sweep) weights.push_back(ConvolutionWeights::build(kb, ks, SimGrid{T, n}));

  const std::size_t levels = sweep.size();
  std::vector<std::vector<PathDifference>> diffs(levels, std::vector<PathDifference>(paths));
  std::vector<std::vector<double>> lift_fine(paths), direct_fine(paths);
  parallel_for(paths, c.req.threads, [&](std::size_t i) {
    BrownianPath w = BrownianPath::generate(derive_seed(c.seed, i), finest, T / static_cast<double>(finest));
    for (std::size_t l = levels; l-- > 0;) {
      while (w.increments.size() > sweep[l]) w = w.coarsen();
      const PathSample lift = simulate_path(s0, coeff, w);
      if (lift.explosion_time) throw ExplosionError("compare: lifted path exploded", *lift.explosion_time);
      const auto direct = direct_euler(weights[l], coeff, x0, w);
      diffs[l][i] = compare_paths(lift.X, direct);
      if (l == levels - 1) {
        lift_fine[i] = lift.X;
        direct_fine[i] = direct;
      }
    }
  });

  Csv summary(c.out / "summary.csv", {"n_atoms", "N", "mean_sup", "mean_rms"});
  std::vector<double> mean_sup;
  for (std::size_t l = 0; l < levels; ++l) {
    double s = 0.0, r = 0.0;
    for (const auto& d : diffs[l]) {
      s += d.sup_abs;
      r += d.rms;
    }
    mean_sup.push_back(s / paths);
    summary.row(ab->size() + as->size(), sweep[l], s / paths, r / paths);
  }
  Csv out(c.out / "compare.csv", {"path_index", "t", "X_lift", "X_direct", "abs_diff"});
  const double h = T / static_cast<double>(finest);
  for (std::size_t i = 0; i < paths; ++i)
    for (std::size_t m = 0; m <= finest; ++m)
      out.row(i, static_cast<double>(m) * h, lift_fine[i][m], direct_fine[i][m],
              std::abs(lift_fine[i][m] - direct_fine[i][m]));

  bool decreasing = true;
  for (std::size_t l = 1; l < levels; ++l) decreasing = decreasing && mean_sup[l] < mean_sup[l - 1];
  c.log << "compare: mean_sup";
  for (double v : mean_sup) c.log << " " << v;
  c.log << "\n";
  return c.req.assert_mode && !decreasing ? kExitAssert : kExitOk;
}

SmoothObservable observable_named(const std::string& name, int line) {
  if (name == "x") return SmoothObservable::identity();
  if (name == "x^2") return SmoothObservable::square();
  if (name == "x^3") return SmoothObservable::power(3);
  if (name == "x^4") return SmoothObservable::power(4);
  if (name == "t") return SmoothObservable::time();
  throw ConfigError("unknown observable '" + name + "'", line);
}

int ito_check(Context& c) {
  const Kernel kb = kernel_at(c.cfg, "kernel_b"), ks = kernel_at(c.cfg, "kernel_sigma");
  const PartitionSpec p = partition_of(c);
  const SimGrid g = grid_of(c);
  const std::size_t paths = paths_of(c);
  const Coefficients coeff = coefficients_of(c);
  const double x0 = c.cfg.number_or("x0", 1.0);
  const std::string obs = c.cfg.string_or("observable", "x^2");
  const SmoothObservable f = observable_named(obs, c.cfg.has("observable") ? c.cfg.find("observable")->line : 0);
  const bool analytic = c.cfg.boolean_or("analytic_kernel", false);

  auto ab = std::make_shared<const DiscreteLiftMeasure>(discretize(kb, p));
  auto as = std::make_shared<const DiscreteLiftMeasure>(discretize(ks, p));
  const LiftedState s0 = initial_lift(x0, ab, as);
  SimulateOptions opts;
  opts.record_factors = true;
  ItoOptions io;
  io.analytic_kernel = analytic;
  io.k_b = &kb;
  io.k_sigma = &ks;
  std::vector<double> residual(paths);
  parallel_for(paths, c.req.threads, [&](std::size_t i) {
    const BrownianPath w = BrownianPath::generate(derive_seed(c.seed, i), g.N, g.h());
    const PathSample run = simulate_path(s0, coeff, g, w, opts);
    if (run.explosion_time) throw ExplosionError("ito-check: path exploded", *run.explosion_time);
    residual[i] = ito_residual(f, run, w, *ab, *as, coeff, 0, g.N, io);
  });
  double mean = 0.0;
  for (double r : residual) mean += r;
  mean /= static_cast<double>(paths);
  double var = 0.0;
  for (double r : residual) var += (r - mean) * (r - mean);
  var /= paths > 1 ? static_cast<double>(paths - 1) : 1.0;
  const double se = std::sqrt(var / static_cast<double>(paths));
  const double z = se > 0.0 ? mean / se : 0.0;
  {
    Csv out(c.out / "residuals.csv", {"path_index", "residual"});
    for (std::size_t i = 0; i < paths; ++i) out.row(i, residual[i]);
  }
  Csv summary(c.out / "summary.csv", {"mean", "stderr", "z_score"});
  summary.row(mean, se, z);
  c.log << "ito-check: mean residual " << mean << ", z " << z << "\n";
  return c.req.assert_mode && !(std::abs(z) < 3.0) ? kExitAssert : kExitOk;
}

int lyapunov(Context& c) {
  const Kernel kb = kernel_at(c.cfg, "kernel_b"), ks = kernel_at(c.cfg, "kernel_sigma");
  const Coefficients coeff = coefficients_of(c);
  const double p = c.cfg.number_or("p", 2.0);
  if (p != 2.0 && p != 4.0) throw ConfigError("p must be 2 or 4", c.cfg.find("p")->line);
  const SmoothObservable V = SmoothObservable::power(static_cast<int>(p));
  const ConfigTable* d = c.cfg.table("domain");
  const double x_max = d ? d->number_or("x_max", 1e3) : 1e3;
  const std::size_t n = d ? d->count_or("n", 401) : 401;
  const ConfigTable* l = c.cfg.table("lags");
  const double l_min = l ? l->number_or("t_min", 1e-3) : 1e-3;
  const double l_max = l ? l->number_or("t_max", 10.0) : 10.0;
  const std::size_t nl = l ? l->count_or("n", 50) : 50;
  const LyapunovReport rep = lyapunov_check(V, kb, ks, coeff, lin_space(-x_max, x_max, n), log_space(l_min, l_max, nl), p);
  Csv out(c.out / "lyapunov.csv",
          {"h_est", "d_est", "status", "witness_x", "witness_lag", "witness_LV", "witness_V"});
  if (rep.passed) {
    out.row(rep.h_est, rep.d_est, "pass", "", "", "", "");
  } else {
    const auto& w = *rep.witness;
    out.row(rep.h_est, rep.d_est, "fail", w.x, w.lag, w.LV, w.V);
  }
  c.log << "lyapunov: " << rep.message << "\n";
  return c.req.assert_mode && !rep.passed ? kExitAssert : kExitOk;
}

int invariant_cmd(Context& c) {
  LongRunConfig lr;
  lr.k_b = kernel_at(c.cfg, "kernel_b");
  lr.k_sigma = kernel_at(c.cfg, "kernel_sigma");
  lr.partition = partition_of(c);
  lr.coeff = coefficients_of(c);
  lr.x0 = c.cfg.number_or("x0", 0.0);
  lr.seed = c.seed;
  lr.threads = c.req.threads;
  const ConfigTable& t = c.cfg.require_table("long_run");
  lr.T_long = t.number("T_long");
  lr.N = t.count("N");
  lr.paths = t.count("paths");
  lr.checkpoints = t.numbers("checkpoints");
  lr.burn_in = t.number_or("burn_in", 0.2);
  lr.restart_from = t.number_or("restart_from", 0.0);
  lr.restart_span = t.number_or("restart_span", 0.0);
  const bool write_samples = t.boolean_or("samples", false);

  const LongRunReport rep = long_run(lr);
  if (rep.failed && rep.checkpoints.empty()) {
    c.log << "invariant: " << rep.message << "\n";
    return kExitRuntime;
  }
  {
    Csv m(c.out / "moments.csv", {"t", "mean", "second_moment"});
    for (std::size_t k = 0; k < rep.checkpoints.size(); ++k) m.row(rep.checkpoints[k], rep.mean[k], rep.second_moment[k]);
  }
  {
    Csv k(c.out / "ks.csv", {"t1", "t2", "ks_stat", "critical_value"});
    for (const auto& row : rep.ks) k.row(row.t1, row.t2, row.statistic, row.critical);
    if (rep.restart) k.row(rep.restart->t1, rep.restart->t2, rep.restart->statistic, rep.restart->critical);
  }
  if (write_samples) {
    Csv s(c.out / "samples.csv", {"t", "path_index", "X"});
    for (std::size_t k = 0; k < rep.checkpoints.size(); ++k)
      for (std::size_t i = 0; i < rep.samples[k].size(); ++i) s.row(rep.checkpoints[k], i, rep.samples[k][i]);
  }
  if (rep.failed) {
    c.log << "invariant: " << rep.message << "\n";
    return kExitRuntime;
  }
  const double ratio = rep.moment_ratio(lr.burn_in * lr.T_long);
  const std::size_t n = rep.checkpoints.size();
  const KSRow* last = n >= 2 ? rep.find_ks(rep.checkpoints[n - 2], rep.checkpoints[n - 1]) : nullptr;
  const bool ok = ratio <= 2.0 && last && last->statistic < last->critical;
  c.log << "invariant: moment ratio " << ratio;
  if (last) c.log << ", KS(" << last->t1 << "," << last->t2 << ") " << last->statistic << " vs " << last->critical;
  c.log << "\n";
  return c.req.assert_mode && !ok ? kExitAssert : kExitOk;
}

void write_manifest(const Context& c) {
  std::ofstream m(c.out / "manifest.txt", std::ios::binary);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a(c.raw));
  m << "subcommand=" << c.req.subcommand << "\n"
    << "config_hash_fnv1a64=" << hash << "\n"
    << "seed=" << c.seed << "\n"
    << "seed_derivation=splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15)\n"
    << "generator=mt19937_64/normal_distribution\n"
    << "version=svlift " << kVersion << "\n";
  std::ofstream copy(c.out / "config.toml", std::ios::binary);
  copy << c.raw;
}

}  // namespace

std::vector<std::string> subcommands() {
  return {"kernel-info", "discretize", "decay-fit", "simulate", "compare", "ito-check", "lyapunov", "invariant"};
}

int run_experiment(const RunRequest& req, std::ostream& log) {
  try {
    std::ifstream in(req.config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + req.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    Context c{req, parse_config(ss.str()), ss.str(), 0, fs::path(req.out_dir), log};
    if (req.seed) {
      c.seed = *req.seed;
    } else {
      const ConfigValue* s = c.cfg.find("seed");
      if (!s) throw ConfigError("missing required key 'seed'");
      if (s->kind != ConfigValue::Kind::Number || s->number < 0 || s->number != std::floor(s->number) ||
          s->number > 9007199254740992.0)
        throw ConfigError("seed must be a nonnegative integer", s->line);
      c.seed = static_cast<std::uint64_t>(s->number);
    }
    int (*fn)(Context&) = nullptr;
    if (req.subcommand == "kernel-info") fn = kernel_info;
    else if (req.subcommand == "discretize") fn = discretize_cmd;
    else if (req.subcommand == "decay-fit") fn = decay_fit;
    else if (req.subcommand == "simulate") fn = simulate;
    else if (req.subcommand == "compare") fn = compare;
    else if (req.subcommand == "ito-check") fn = ito_check;
    else if (req.subcommand == "lyapunov") fn = lyapunov;
    else if (req.subcommand == "invariant") fn = invariant_cmd;
    else throw ConfigError("unknown subcommand '" + req.subcommand + "'");
    fs::create_directories(c.out);
    write_manifest(c);
    return fn(c);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ExplosionError& e) {
    log << "explosion at t=" << e.time() << ": " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace svlift
