#pragma once

#include "svlift/kernels.h"

#include <span>
#include <string>
#include <vector>

namespace svlift {

struct PartitionSpec {
  std::size_t n_cells = 200;
  double x_min = 1e-5;
  double x_max = 1e5;
  /// Collapse the density mass on [edge, edge + x_min] into one extra first-moment atom instead of discarding it.
  bool lump_below = true;
};

void validate(const PartitionSpec& p);

/// Finite atom system {(x_i, c_i)} with strictly increasing nodes and nonnegative masses.
struct DiscreteLiftMeasure {
  std::vector<Atom> atoms;
  std::string source;  // kernel description or "atoms"
  PartitionSpec partition;

  std::size_t size() const { return atoms.size(); }
  double total_mass() const;
  /// sum_i c_i e^{-x_i t}
  double kernel(double t) const;
};

/// Wraps an explicit atom list (sorted, coincident nodes merged).
DiscreteLiftMeasure from_atoms(std::vector<Atom> atoms, std::string source = "atoms");

/// Atoms pass through unchanged; densities are split on a geometric partition of [edge + x_min, edge + x_max]
/// (edge = left end of the support) with
/// first-moment node placement per cell.
DiscreteLiftMeasure discretize(const LiftMeasureSpec& m, const PartitionSpec& p);
DiscreteLiftMeasure discretize(const Kernel& k, const PartitionSpec& p = {});

struct ApproxError {
  double sup_abs = 0.0;
  double sup_rel = 0.0;
};

ApproxError kernel_approx_error(const Kernel& k, const DiscreteLiftMeasure& d, std::span<const double> t_grid);

/// Bound on what the truncation to [x_min, x_max] neglects at t = t_min: the upper tail integral of
/// e^{-x t} plus, for the region below x_min, either the lumping error 0.5 t^2 x_min^2 * mass or the mass itself.
double tail_bound(const LiftMeasureSpec& m, const PartitionSpec& p, double t_min);

/// Mass of m on the portion of [0, inf) the partition keeps (including the lumped lower region).
double truncated_mass(const LiftMeasureSpec& m, const PartitionSpec& p);

}  // namespace svlift
