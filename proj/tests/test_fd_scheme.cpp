#include <cmath>

#include "doctest.h"
#include "xs/fd_scheme.hpp"

using namespace xs;

TEST_SUITE("fd_scheme") {

TEST_CASE("staggered coefficients reproduce the classical tables") {
  auto a1 = staggered_coefficients(1);
  REQUIRE(a1.size() == 1);
  CHECK(a1[0] == doctest::Approx(1.0).epsilon(1e-15));

  auto a2 = staggered_coefficients(2);
  CHECK(a2[0] == doctest::Approx(9.0 / 8.0).epsilon(1e-15));
  CHECK(a2[1] == doctest::Approx(-1.0 / 24.0).epsilon(1e-15));

  auto a4 = staggered_coefficients(4);
  CHECK(a4[0] == doctest::Approx(1225.0 / 1024.0).epsilon(1e-14));
  CHECK(a4[1] == doctest::Approx(-245.0 / 3072.0).epsilon(1e-14));
  CHECK(a4[2] == doctest::Approx(49.0 / 5120.0).epsilon(1e-14));
  CHECK(a4[3] == doctest::Approx(-5.0 / 7168.0).epsilon(1e-14));
}

TEST_CASE("coefficients are first-order consistent for every supported order") {
  for (int k = 1; k <= 7; ++k) {
    auto a = staggered_coefficients(k);
    double s = 0.0;
    for (int m = 1; m <= k; ++m) s += a[m - 1] * (2.0 * m - 1.0);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("stable_dt closed form for k=1") {
  Grid2D g(50, 50, 20.0, 20.0);
  Medium m = Medium::homogeneous(g, 4.0e9, 1000.0);  // c = 2000 m/s
  FdScheme sch(1, 1.0, 0.0, 1e-4);
  double expect = 20.0 / (2000.0 * std::sqrt(2.0));
  CHECK(stable_dt(m, sch) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(stable_dt(m, sch) == doctest::Approx(7.071e-3).epsilon(1e-4));
}

TEST_CASE("stable_dt doubles when the spacing doubles") {
  Medium m1 = Medium::homogeneous(Grid2D(50, 50, 20.0, 20.0), 4.0e9, 1000.0);
  Medium m2 = Medium::homogeneous(Grid2D(50, 50, 40.0, 40.0), 4.0e9, 1000.0);
  FdScheme sch(3, 0.8, 0.0, 1e-4);
  CHECK(stable_dt(m2, sch) == doctest::Approx(2.0 * stable_dt(m1, sch)).epsilon(1e-12));
}

TEST_CASE("stable_dt for k=4 matches the coefficient-sum oracle") {
  // independent oracle: sum the classical order-8 staggered coefficients
  double sum_abs =
      1225.0 / 1024.0 + 245.0 / 3072.0 + 49.0 / 5120.0 + 5.0 / 7168.0;
  CHECK(sum_abs == doctest::Approx(1.2863095238).epsilon(1e-10));
  Medium m = Medium::homogeneous(Grid2D(50, 50, 20.0, 20.0), 4.0e9, 1000.0);
  FdScheme sch(4, 1.0, 0.0, 1e-4);
  double expect = 20.0 / (2000.0 * std::sqrt(2.0) * sum_abs);
  CHECK(stable_dt(m, sch) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(stable_dt(m, sch) == doctest::Approx(5.497e-3).epsilon(1e-4));
}

TEST_CASE("cfl_safety scales the bound linearly") {
  Medium m = Medium::homogeneous(Grid2D(50, 50, 20.0, 20.0), 4.0e9, 1000.0);
  double full = stable_dt(m, FdScheme(4, 1.0, 0.0, 1e-4));
  double safe = stable_dt(m, FdScheme(4, 0.5, 0.0, 1e-4));
  CHECK(safe == doctest::Approx(0.5 * full).epsilon(1e-14));
}

TEST_CASE("scheme parameter validation") {
  CHECK_THROWS_AS(FdScheme(0, 0.9, 200.0, 1e-4), ConfigError);
  CHECK_THROWS_AS(FdScheme(8, 0.9, 200.0, 1e-4), ConfigError);
  CHECK_THROWS_AS(FdScheme(4, 0.0, 200.0, 1e-4), ConfigError);
  CHECK_THROWS_AS(FdScheme(4, 1.5, 200.0, 1e-4), ConfigError);
  CHECK_THROWS_AS(FdScheme(4, 0.9, 200.0, 2.0), ConfigError);
}

}  // TEST_SUITE
