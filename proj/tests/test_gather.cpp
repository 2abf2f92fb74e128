#include <cmath>

#include "doctest.h"
#include "xs/gather.hpp"

using namespace xs;

namespace {
GatherSpec small_spec(int ntr = 2, int nt = 2, double dxtr = 1.0, double dt = 1.0) {
  std::vector<double> xs(ntr);
  for (int r = 0; r < ntr; ++r) xs[r] = r * dxtr;
  return GatherSpec(0.0, xs, TimeAxis(nt, dt, 0.0));
}

Gather filled(const GatherSpec& spec, double v) {
  Gather g(spec);
  for (double& x : g.values()) x = v;
  return g;
}
}  // namespace

TEST_SUITE("core_grid") {

TEST_CASE("dot of all-ones 2x2 with unit weights is 4") {
  Gather a = filled(small_spec(), 1.0);
  CHECK(gather_dot(a, a) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("zero gather annihilates the inner product") {
  GatherSpec spec = small_spec(5, 7, 2.0, 0.1);
  Gather a = random_gather(spec, 11);
  Gather z(spec);
  CHECK(gather_dot(a, z) == 0.0);
}

TEST_CASE("dot matches an independent long-double summation on 201x2001") {
  GatherSpec spec = small_spec(201, 2001, 20.0, 0.004);
  Gather a = random_gather(spec, 1);
  Gather b = random_gather(spec, 2);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    acc += static_cast<long double>(a.values()[i]) * b.values()[i];
  double expect = static_cast<double>(acc) * 20.0 * 0.004;
  CHECK(gather_dot(a, b) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("dot shape mismatch names the offending axis") {
  Gather a(small_spec(2, 2));
  Gather b(small_spec(3, 2));
  CHECK_THROWS_WITH_AS(gather_dot(a, b),
                       doctest::Contains("trace count mismatch"), ShapeError);
  Gather c(small_spec(2, 4));
  CHECK_THROWS_WITH_AS(gather_dot(a, c),
                       doctest::Contains("sample count mismatch"), ShapeError);
}

TEST_CASE("axpy identities") {
  GatherSpec spec = small_spec(4, 9, 5.0, 0.01);
  Gather y = random_gather(spec, 3);
  Gather x = random_gather(spec, 4);

  Gather same = gather_axpy(0.0, x, y);
  CHECK(same.values() == y.values());

  Gather twice = gather_axpy(1.0, y, y);
  for (std::size_t i = 0; i < y.values().size(); ++i)
    CHECK(twice.values()[i] == doctest::Approx(2.0 * y.values()[i]));

  Gather zero = gather_axpy(-1.0, y, y);
  CHECK(zero.max_abs() == 0.0);
}

TEST_CASE("dot is symmetric and bilinear on random inputs") {
  GatherSpec spec = small_spec(13, 40, 12.5, 0.002);
  Gather a = random_gather(spec, 5);
  Gather b = random_gather(spec, 6);
  Gather c = random_gather(spec, 7);
  double ab = gather_dot(a, b);
  CHECK(gather_dot(b, a) == doctest::Approx(ab).epsilon(1e-13));
  double lhs = gather_dot(a, gather_axpy(0.37, b, c));
  double rhs = 0.37 * ab + gather_dot(a, c);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  CHECK(gather_dot(a, a) >= 0.0);
  Gather z(spec);
  CHECK(gather_dot(z, z) == 0.0);
}

TEST_CASE("mute covering the whole axis leaves the gather unchanged") {
  GatherSpec spec = small_spec(3, 50, 10.0, 0.01);
  Gather g = random_gather(spec, 8);
  Gather m = mute(g, -1.0, 10.0, 0.0);
  CHECK(m.values() == g.values());
}

TEST_CASE("mute window before the axis start zeroes everything") {
  GatherSpec spec = small_spec(3, 50, 10.0, 0.01);  // t in [0, 0.49]
  Gather g = random_gather(spec, 9);
  Gather m = mute(g, -2.0, -1.0, 0.2);
  CHECK(m.max_abs() == 0.0);
}

TEST_CASE("mute ramp midpoint scales by exactly one half") {
  // dt=0.01, window [0.2, 0.3] with ramp 0.1: midpoint of the rising ramp
  // sits at t=0.15, an exact sample.
  GatherSpec spec = small_spec(1, 50, 1.0, 0.01);
  Gather g = filled(spec, 1.0);
  Gather m = mute(g, 0.2, 0.3, 0.1);
  int idx = 15;
  CHECK(m.at(0, idx) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mute with ramp 0 applied twice equals applied once") {
  GatherSpec spec = small_spec(4, 64, 10.0, 0.01);
  Gather g = random_gather(spec, 10);
  Gather once = mute(g, 0.1, 0.4, 0.0);
  Gather twice = mute(once, 0.1, 0.4, 0.0);
  CHECK(once.values() == twice.values());
}

TEST_CASE("time reversal flips the axis and is an involution") {
  GatherSpec spec(0.0, {0.0, 10.0}, TimeAxis(11, 0.1, -0.3));
  Gather g = random_gather(spec, 12);
  Gather r = time_reverse_gather(g);
  CHECK(r.time().t0 == doctest::Approx(-g.time().t_end()));
  CHECK(r.time().t_end() == doctest::Approx(-g.time().t0));
  Gather rr = time_reverse_gather(r);
  CHECK(rr.values() == g.values());
  CHECK(rr.time().t0 == doctest::Approx(g.time().t0).epsilon(1e-14));
  CHECK(rr.time().dt == g.time().dt);
}

}  // TEST_SUITE
