#include "svlift/mittag_leffler.h"
#include "svlift/numerics.h"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace svlift;

TEST_CASE("alpha = beta = 1 is the exponential") {
  for (double z : lin_space(-5.0, 5.0, 41)) {
    INFO("z=", z);
    CHECK(std::abs(mittag_leffler(1.0, 1.0, z) - std::exp(z)) <= 1e-10 * std::max(1.0, std::exp(z)));
  }
}

TEST_CASE("alpha = 2 gives the cosine") {
  for (double z : lin_space(-5.0, 5.0, 41)) CHECK(std::abs(mittag_leffler(2.0, 1.0, -z * z) - std::cos(z)) <= 1e-10);
  CHECK(mittag_leffler(2.0, 1.0, -std::numbers::pi * std::numbers::pi) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("high-precision reference values") {
  // 40-digit references
  CHECK(mittag_leffler(0.7, 0.7, -1.0) == doctest::Approx(0.2103933463890237).epsilon(1e-12));
  CHECK(mittag_leffler(0.3, 0.3, -1.0) == doctest::Approx(0.077316799030089673).epsilon(1e-12));
  CHECK(mittag_leffler(0.7, 0.7, -4.0) == doctest::Approx(0.019722733789771927).epsilon(1e-10));
  CHECK(mittag_leffler(0.3, 0.3, -4.0) == doctest::Approx(0.010705694130905866).epsilon(1e-10));
  CHECK(mittag_leffler(0.7, 1.0, -4.0) == doctest::Approx(0.099760254890514629).epsilon(1e-10));
  CHECK(mittag_leffler(0.5, 1.0, -3.0) == doctest::Approx(0.17900115118138995).epsilon(1e-10));
  CHECK(mittag_leffler(0.7, 1.0, 0.5) == doctest::Approx(1.824985056851202).epsilon(1e-12));
  // e^{100} erfc(10)
  CHECK(mittag_leffler(0.5, 1.0, -10.0) == doctest::Approx(0.056140992743822586).epsilon(1e-10));
}

TEST_CASE("branches agree where they overlap") {
  for (double a : {0.3, 0.5, 0.7}) {
    for (double b : {a, 1.0}) {
      for (double z : {-0.5, -2.0, -4.0, -8.0}) {
        INFO("alpha=", a, " beta=", b, " z=", z);
        const double mp = mittag_leffler_series_mp(a, b, z);
        CHECK(std::abs(mittag_leffler_integral(a, b, z) - mp) <= 1e-10 * std::max(1.0, std::abs(mp)));
      }
    }
  }
  CHECK(mittag_leffler_series(0.9, 1.0, -1.0, 200) == doctest::Approx(mittag_leffler_series_mp(0.9, 1.0, -1.0)).epsilon(1e-13));
}

TEST_CASE("asymptotic branch for large negative arguments") {
  CHECK(mittag_leffler_asymptotic(0.5, 1.0, -100.0) ==
        doctest::Approx(mittag_leffler_integral(0.5, 1.0, -100.0)).epsilon(1e-8));
  CHECK(mittag_leffler(0.7, 0.7, -1e4) == doctest::Approx(mittag_leffler_asymptotic(0.7, 0.7, -1e4)).epsilon(1e-12));
  const double far = mittag_leffler(0.5, 1.0, -1000.0);
  CHECK(far == doctest::Approx(1.0 / (1000.0 * std::sqrt(std::numbers::pi))).epsilon(1e-5));
}

TEST_CASE("the series is slowly varying in alpha") {
  CHECK(std::abs(mittag_leffler(0.7, 1.0, 0.5) - mittag_leffler(0.7000001, 1.0, 0.5)) < 1e-5);
}

TEST_CASE("unreachable arguments raise range errors") {
  CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, 1e4), std::range_error);
  MittagLefflerParams p;
  p.alpha = 0.7;
  p.terms = 10;
  CHECK_THROWS_AS(mittag_leffler(p, 0.5), std::domain_error);
  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0, 0.5), std::domain_error);
}
