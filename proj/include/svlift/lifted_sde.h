#pragma once

#include "svlift/brownian.h"
#include "svlift/quadrature.h"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace svlift {

using CoefficientFn = std::function<double(double t, double x)>;

struct Coefficients {
  CoefficientFn b = [](double, double) { return 0.0; };
  CoefficientFn sigma = [](double, double) { return 0.0; };
  double c_lg = 0.0;
  std::optional<double> lipschitz;  // declared Lipschitz constant of b and sigma in x, if any
  std::string name = "zero";
};

/// Worst ratio max(|b|, |sigma|) / (c_lg (1 + |x|)) over grid x and times t; <= 1 means the declared growth holds.
double linear_growth_ratio(const Coefficients& c, const std::vector<double>& x_grid,
                           const std::vector<double>& t_grid = {0.0});

enum class DriftWeight { Phi1, LeftPoint };
enum class NoiseWeight { FullStep, Midpoint };

struct SchemeOptions {
  DriftWeight drift = DriftWeight::Phi1;
  NoiseWeight noise = NoiseWeight::FullStep;
  double explosion_threshold = 1e12;
};

struct LiftedState {
  std::shared_ptr<const DiscreteLiftMeasure> atoms_b;
  std::shared_ptr<const DiscreteLiftMeasure> atoms_sigma;
  std::vector<double> y_b;
  std::vector<double> y_sigma;
  double y0 = 0.0;
};

LiftedState initial_lift(double x0, const DiscreteLiftMeasure& atoms_b, const DiscreteLiftMeasure& atoms_sigma);
LiftedState initial_lift(double x0, std::shared_ptr<const DiscreteLiftMeasure> atoms_b,
                         std::shared_ptr<const DiscreteLiftMeasure> atoms_sigma);

/// X = y0 + sum y_b + sum y_sigma; throws DomainError on non-finite values.
double observable(const LiftedState& s);

/// Step coefficients for a fixed h, shared by the single-step API and the path simulator.
class Stepper {
 public:
  Stepper(const DiscreteLiftMeasure& atoms_b, const DiscreteLiftMeasure& atoms_sigma, double h,
          SchemeOptions opts = {});
  /// Advances s in place from time t; throws ExplosionError when a factor exceeds the threshold.
  void step(LiftedState& s, double t, double dW, const Coefficients& c) const;
  double h() const { return h_; }

 private:
  double h_;
  SchemeOptions opts_;
  std::vector<double> decay_b_, drift_w_, decay_s_, noise_w_;
};

LiftedState exp_euler_step(const LiftedState& s, double t, double h, double dW, const Coefficients& c,
                           SchemeOptions opts = {});

struct SimulateOptions {
  SchemeOptions scheme;
  /// Time index of the first step; the k-th step then runs from (start_step + k) * h.
  std::size_t start_step = 0;
  bool record_factors = false;
};

struct PathSample {
  double h = 0.0;
  std::size_t start_step = 0;
  std::vector<double> t;
  std::vector<double> X;
  /// Factor values at every recorded grid point (only with record_factors).
  std::vector<std::vector<double>> y_b;
  std::vector<std::vector<double>> y_sigma;
  double y0 = 0.0;
  LiftedState final_state;
  std::optional<double> explosion_time;
};

/// Runs w.increments.size() steps of size w.h. On explosion the partial path is returned with explosion_time set.
PathSample simulate_path(const LiftedState& s0, const Coefficients& c, const BrownianPath& w,
                         const SimulateOptions& opts = {});
PathSample simulate_path(const LiftedState& s0, const Coefficients& c, const SimGrid& g, const BrownianPath& w,
                         const SimulateOptions& opts = {});

/// F_k(x) = inf_y { F(y) + k |x - y| } by grid minimization over |y - x| <= 2 (|F(x)| + c_lg (1 + |x|)) / k.
class LipschitzEnvelope {
 public:
  LipschitzEnvelope(std::function<double(double)> f, double c_lg, double k);
  double operator()(double x) const;

 private:
  std::function<double(double)> f_;
  double c_lg_;
  double k_;
};

enum class PicardRule { PiecewiseConstant, PiecewiseLinear };

struct PicardOptions {
  PicardRule rule = PicardRule::PiecewiseConstant;
  double tolerance = 1e-10;
  std::size_t max_iterations = 200;
};

struct PicardResult {
  std::vector<double> t;
  std::vector<double> X;
  std::size_t iterations = 0;
  double last_change = 0.0;
};

/// Fixed point of X(t) = x0 + sum_i c_i int_0^t e^{-x_i (t-s)} b(s, X(s)) ds on the grid. PiecewiseConstant
/// holds b at the left point of each cell (the time stepper's quadrature); PiecewiseLinear interpolates b.
PicardResult picard_solve_deterministic(const Coefficients& c, double x0, const DiscreteLiftMeasure& atoms_b,
                                        const SimGrid& g, const PicardOptions& opts = {});

}  // namespace svlift
