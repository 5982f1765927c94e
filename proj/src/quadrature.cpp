#include "svlift/quadrature.h"

#include "svlift/errors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svlift {

void validate(const PartitionSpec& p) {
  if (p.n_cells < 1) throw std::invalid_argument("partition: n_cells must be >= 1");
  if (!(p.x_min > 0.0) || !(p.x_min < p.x_max) || !std::isfinite(p.x_max))
    throw std::invalid_argument("partition: need 0 < x_min < x_max < inf");
}

double DiscreteLiftMeasure::total_mass() const {
  double sum = 0.0;
  for (const auto& a : atoms) sum += a.mass;
  return sum;
}

double DiscreteLiftMeasure::kernel(double t) const {
  double sum = 0.0;
  for (const auto& a : atoms) sum += a.mass * std::exp(-a.node * t);
  return sum;
}

DiscreteLiftMeasure from_atoms(std::vector<Atom> atoms, std::string source) {
  for (const auto& a : atoms) {
    if (!(a.mass >= 0.0) || !(a.node >= 0.0) || !std::isfinite(a.node) || !std::isfinite(a.mass))
      throw std::invalid_argument("atoms must have finite nonnegative nodes and masses");
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.node < r.node; });
  DiscreteLiftMeasure d;
  d.source = std::move(source);
  for (const auto& a : atoms) {
    if (!d.atoms.empty() && d.atoms.back().node == a.node) {
      d.atoms.back().mass += a.mass;
    } else {
      d.atoms.push_back(a);
    }
  }
  return d;
}

DiscreteLiftMeasure discretize(const LiftMeasureSpec& m, const PartitionSpec& p) {
  validate(p);
  if (m.is_atomic()) {
    DiscreteLiftMeasure d = from_atoms(m.atoms());
    d.partition = p;
    return d;
  }
  const PowerLawDensity& density = m.density();
  auto one = [](double) { return 1.0; };
  auto ident = [](double x) { return x; };

  DiscreteLiftMeasure d;
  d.partition = p;
  d.source = "density";

  // The partition is geometric in the distance to the support edge, so a singular edge is resolved
  // the same way whether it sits at 0 or at a damping rate.
  const double edge = density.edge;
  if (p.lump_below) {
    const double c = integrate_against(m, one, edge, edge + p.x_min);
    if (c > 0.0) d.atoms.push_back({integrate_against(m, ident, edge, edge + p.x_min) / c, c});
  }
  const double ratio = std::log(p.x_max / p.x_min) / static_cast<double>(p.n_cells);
  for (std::size_t i = 0; i < p.n_cells; ++i) {
    const double lo = edge + p.x_min * std::exp(ratio * static_cast<double>(i));
    const double b = edge + ((i + 1 == p.n_cells) ? p.x_max : p.x_min * std::exp(ratio * static_cast<double>(i + 1)));
    if (b <= lo) continue;
    const double c = integrate_against(m, one, lo, b);
    if (!(c > 0.0)) continue;
    const double node = integrate_against(m, ident, lo, b) / c;
    if (!std::isfinite(node) || !std::isfinite(c)) throw TailError("discretize: cell integral did not converge", c, 0.0);
    d.atoms.push_back({std::clamp(node, lo, b), c});
  }
  return d;
}

DiscreteLiftMeasure discretize(const Kernel& k, const PartitionSpec& p) {
  DiscreteLiftMeasure d = discretize(lift_measure(k), p);
  d.source = k.describe();
  return d;
}

ApproxError kernel_approx_error(const Kernel& k, const DiscreteLiftMeasure& d, std::span<const double> t_grid) {
  ApproxError e;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw DomainError("kernel_approx_error: time grid must be positive");
    const double exact = k(t);
    const double diff = std::abs(exact - d.kernel(t));
    e.sup_abs = std::max(e.sup_abs, diff);
    e.sup_rel = std::max(e.sup_rel, diff / std::abs(exact));
  }
  return e;
}

double tail_bound(const LiftMeasureSpec& m, const PartitionSpec& p, double t_min) {
  if (!(t_min > 0.0)) throw DomainError("tail_bound: t_min must be positive");
  validate(p);
  if (m.is_atomic()) return 0.0;
  const PowerLawDensity& density = m.density();
  const double inf = std::numeric_limits<double>::infinity();
  const double edge = density.edge;
  double bound = integrate_against(m, [t_min](double x) { return std::exp(-x * t_min); }, edge + p.x_max, inf);
  // Lumping [edge, edge + x_min] into its first-moment atom errs by at most t^2 x_min^2 / 2 per unit mass.
  const double below = integrate_against(m, [](double) { return 1.0; }, edge, edge + p.x_min);
  bound += p.lump_below ? 0.5 * t_min * t_min * p.x_min * p.x_min * below : below;
  return bound;
}

double truncated_mass(const LiftMeasureSpec& m, const PartitionSpec& p) {
  if (m.is_atomic()) {
    double sum = 0.0;
    for (const auto& a : m.atoms()) sum += a.mass;
    return sum;
  }
  const double edge = m.density().edge;
  const double lo = p.lump_below ? edge : edge + p.x_min;
  return integrate_against(m, [](double) { return 1.0; }, lo, edge + p.x_max);
}

}  // namespace svlift
