#include "svlift/errors.h"
#include "svlift/numerics.h"
#include "svlift/quadrature.h"

#include <doctest.h>

#include <cmath>

using namespace svlift;

TEST_CASE("atoms pass through discretization unchanged") {
  const auto d = discretize(Kernel::exp_sum({{2.0, 3.0}}));
  REQUIRE(d.size() == 1);
  CHECK(d.atoms[0].node == 3.0);
  CHECK(d.atoms[0].mass == 2.0);
}

TEST_CASE("single cell matches closed-form antiderivatives") {
  PartitionSpec p;
  p.n_cells = 1;
  p.x_min = 1.0;
  p.x_max = 2.0;
  p.lump_below = false;
  const auto d = discretize(Kernel::fractional(0.7), p);
  REQUIRE(d.size() == 1);
  // c = A (2^0.3 - 1)/0.3, x = A (2^1.3 - 1)/1.3 / c with A = 1/(Gamma(0.7) Gamma(0.3))
  CHECK(d.atoms[0].mass == doctest::Approx(0.19841290620240691).epsilon(1e-10));
  CHECK(d.atoms[0].node == doctest::Approx(1.4599153092837468).epsilon(1e-10));
}

TEST_CASE("fractional kernel with 200 cells is accurate on [0.01, 5]") {
  const Kernel k = Kernel::fractional(0.7);
  const auto grid = lin_space(0.01, 5.0, 10000);
  const auto e = kernel_approx_error(k, discretize(k), grid);
  CHECK(e.sup_abs < 1e-2);
}

TEST_CASE("exact representations have zero approximation error") {
  const Kernel k = Kernel::exp_sum({{1.0, 0.5}, {0.5, 2.0}});
  const auto e = kernel_approx_error(k, discretize(k), lin_space(0.01, 5.0, 500));
  CHECK(e.sup_abs < 1e-15);
  CHECK(e.sup_rel < 1e-15);
}

TEST_CASE("refining the partition reduces the error") {
  const Kernel k = Kernel::fractional(0.7);
  const auto grid = lin_space(0.01, 5.0, 2000);
  PartitionSpec coarse;
  coarse.n_cells = 50;
  const auto e50 = kernel_approx_error(k, discretize(k, coarse), grid);
  const auto e200 = kernel_approx_error(k, discretize(k), grid);
  CHECK(e200.sup_abs < e50.sup_abs);
}

TEST_CASE("gamma kernel with 200 cells") {
  const Kernel k = Kernel::gamma(0.7, 2.0);
  const auto e = kernel_approx_error(k, discretize(k), lin_space(0.01, 5.0, 10000));
  CHECK(e.sup_rel < 1e-2);
}

TEST_CASE("tail bound") {
  const PartitionSpec p;
  CHECK(tail_bound(lift_measure(Kernel::exp_sum({{1.0, 1.0}})), p, 0.01) == 0.0);
  // incomplete-gamma reference for the upper tail is ~4e-437, below double range
  const auto m = lift_measure(Kernel::fractional(0.7));
  CHECK(tail_bound(m, p, 0.01) < 1e-14);
  PartitionSpec narrow = p;
  narrow.x_max = 1e3;
  CHECK(tail_bound(m, narrow, 0.01) > tail_bound(m, p, 0.01));
  narrow.x_max = 1e2;
  CHECK(tail_bound(m, narrow, 0.01) > 1e-3);
  PartitionSpec wide = p;
  wide.x_max = 1e8;
  CHECK(tail_bound(m, wide, 0.01) < 1e-15);
  CHECK_THROWS_AS(tail_bound(m, p, 0.0), DomainError);
}

TEST_CASE("discretized measures are nonnegative, sorted and conserve mass") {
  const Kernel frac = Kernel::fractional(0.7);
  for (const auto& k : {frac, Kernel::fractional(0.3), Kernel::gamma(0.7, 2.0), Kernel::damped(frac, 1.0),
                        Kernel::shifted(frac, 1.0), Kernel::shifted(Kernel::gamma(0.4, 3.0), 0.5)}) {
    INFO(k.describe());
    const PartitionSpec p;
    const auto d = discretize(k, p);
    REQUIRE(d.size() > 0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d.atoms[i].mass >= 0.0);
      if (i > 0) CHECK(d.atoms[i].node > d.atoms[i - 1].node);
    }
    const double truth = truncated_mass(lift_measure(k), p);
    CHECK(std::abs(d.total_mass() - truth) <= 1e-8 * truth);
  }
}

TEST_CASE("doubling cells and widening the window does not worsen the fit by more than 10%") {
  const auto grid = log_space(0.01, 5.0, 400);
  for (const auto& k : {Kernel::fractional(0.7), Kernel::gamma(0.7, 2.0), Kernel::fractional(0.4)}) {
    PartitionSpec p;
    p.n_cells = 50;
    p.x_min = 1e-3;
    p.x_max = 1e3;
    double previous = kernel_approx_error(k, discretize(k, p), grid).sup_rel;
    for (int step = 0; step < 2; ++step) {
      p.n_cells *= 2;
      p.x_min /= 10.0;
      p.x_max *= 10.0;
      const double next = kernel_approx_error(k, discretize(k, p), grid).sup_rel;
      INFO(k.describe(), " n=", p.n_cells);
      CHECK(next <= 1.1 * previous);
      previous = next;
    }
  }
}

TEST_CASE("invalid partitions are rejected") {
  PartitionSpec p;
  p.x_min = 10.0;
  p.x_max = 1.0;
  CHECK_THROWS_AS(discretize(Kernel::fractional(0.5), p), std::invalid_argument);
  p = PartitionSpec{};
  p.n_cells = 0;
  CHECK_THROWS_AS(discretize(Kernel::fractional(0.5), p), std::invalid_argument);
}

TEST_CASE("explicit atom lists are sorted and merged") {
  const auto d = from_atoms({{2.0, 1.0}, {1.0, 0.5}, {2.0, 0.25}});
  REQUIRE(d.size() == 2);
  CHECK(d.atoms[0].node == 1.0);
  CHECK(d.atoms[1].mass == 1.25);
  CHECK_THROWS_AS(from_atoms({{1.0, -1.0}}), std::invalid_argument);
}
