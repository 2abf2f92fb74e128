#include <cmath>

#include "doctest.h"
#include "support/testconfig.hpp"
#include "xs/spectral.hpp"
#include "xs/wave_ops.hpp"

using namespace xs;

namespace {
OpConfig desk_op(Direction dir = Direction::causal) {
  testcfg::Desk d;
  return OpConfig{d.medium, d.scheme, d.z_src, d.z_rec, d.x_coords, d.time, dir};
}
}  // namespace

TEST_SUITE("wave_ops") {

TEST_CASE("modeling operators map zero to zero") {
  OpConfig cfg = desk_op();
  Gather z(cfg.src_spec());
  CHECK(make_S(cfg).apply(z).max_abs() == 0.0);
  CHECK(make_V(cfg).apply(z).max_abs() == 0.0);
  CHECK(make_S_offdiag(cfg, SourceSlot::h, TraceSlot::vz).apply(z).max_abs() == 0.0);
}

TEST_CASE("requesting a diagonal block through make_S_offdiag is rejected") {
  OpConfig cfg = desk_op();
  CHECK_THROWS_AS(make_S_offdiag(cfg, SourceSlot::h, TraceSlot::p), ConfigError);
  CHECK_THROWS_AS(make_S_offdiag(cfg, SourceSlot::f, TraceSlot::vz), ConfigError);
}

TEST_CASE("coincident source and receiver depths are rejected") {
  OpConfig cfg = desk_op();
  cfg.z_rec = cfg.z_src;
  CHECK_THROWS_AS(make_S(cfg), ConfigError);
}

TEST_CASE("dot tests: S, V, and the off-diagonal blocks pair exactly") {
  OpConfig cfg = desk_op();
  CHECK(dot_test(make_S(cfg), 3, 1) < 1e-10);
  CHECK(dot_test(make_V(cfg), 3, 2) < 1e-10);
  CHECK(dot_test(make_S_offdiag(cfg, SourceSlot::h, TraceSlot::vz), 3, 3) < 1e-10);
  CHECK(dot_test(make_S_offdiag(cfg, SourceSlot::f, TraceSlot::p), 3, 4) < 1e-10);
}

TEST_CASE("dot tests for anticausal operators") {
  OpConfig cfg = desk_op(Direction::anticausal);
  CHECK(dot_test(make_S(cfg), 2, 5) < 1e-10);
  CHECK(dot_test(make_V(cfg), 2, 6) < 1e-10);
}

TEST_CASE("time reversal operator is an exact self-adjoint involution") {
  testcfg::Desk d;
  GatherSpec spec = d.src_spec();
  LinearOp R = make_R(spec);
  Gather a = random_gather(spec, 7);
  Gather b = random_gather(spec, 8);
  CHECK(rel_l2(R.apply(R.apply(a)), a) == 0.0);
  CHECK(gather_dot(R.apply(a), b) == doctest::Approx(gather_dot(a, R.apply(b))).epsilon(1e-15));
  CHECK(dot_test(R, 3, 9) < 1e-15);
}

TEST_CASE("adjoint equals time-reversed role-swapped modeling (continuum identity)") {
  // S^T r vs R S_swap R r on band-limited downgoing data: exact in the
  // continuum, discrete to a percent.
  Scenario scn = testcfg::mini_scenario(false);
  const DowngoingFields& df = testcfg::mini_fields();
  OpConfig cfg = testcfg::mini_op(scn);
  OpConfig swapped = cfg;
  std::swap(swapped.z_src, swapped.z_rec);
  LinearOp S = make_S(cfg);
  LinearOp S_swap = make_S(swapped);
  LinearOp R_dom = make_R(S.domain);
  LinearOp R_ran = make_R(S.range);

  Gather r = S.apply(df.h_s);  // downgoing by construction
  Gather direct = S.adjoint_apply(r);
  Gather via_reversal = R_dom.apply(S_swap.apply(R_ran.apply(r)));
  CHECK(rel_l2(via_reversal, direct) < 1e-2);
}

TEST_CASE("anticausal modeling is minus the transposed role-swapped causal modeling") {
  Scenario scn = testcfg::mini_scenario(false);
  const DowngoingFields& df = testcfg::mini_fields();
  OpConfig anti = testcfg::mini_op(scn, Direction::anticausal);
  OpConfig swapped = testcfg::mini_op(scn);
  std::swap(swapped.z_src, swapped.z_rec);
  LinearOp S_anti = make_S(anti);
  LinearOp S_swap = make_S(swapped);
  const Gather& x = df.h_s;
  Gather lhs = S_anti.apply(x);
  Gather rhs = gather_scale(-1.0, S_swap.adjoint_apply(Gather(S_swap.range, x.values())));
  CHECK(rel_l2(lhs, Gather(lhs.spec(), rhs.values())) < 1e-2);
}

TEST_CASE("penalty operator zeroes the trace at the source position") {
  testcfg::Desk d;
  PenaltyOp A = make_A(1200.0, d.src_spec());
  Gather g(d.src_spec());
  for (double& v : g.values()) v = 1.0;
  Gather out = A.A.apply(g);
  CHECK(out.at(3, 0) == 0.0);  // x = 1200
  CHECK(out.at(4, 0) == doctest::Approx(100.0));
  Gather out2 = A.AtA.apply(g);
  CHECK(out2.at(4, 10) == doctest::Approx(1.0e4));
}

TEST_CASE("penalty inverse square root matches the closed form") {
  testcfg::Desk d;
  PenaltyOp A = make_A(300.0, GatherSpec(0.0, {300.0, 1300.0}, d.time));
  Gather g(A.spec);
  for (double& v : g.values()) v = 1.0;
  Gather out = A.inv_sqrt(1e-3).apply(g);
  CHECK(out.at(1, 5) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(out.at(0, 5) == doctest::Approx(1.0));
}

TEST_CASE("penalty operators are exactly self-adjoint and commute") {
  testcfg::Desk d;
  PenaltyOp A = make_A(1234.5, d.src_spec());
  CHECK(dot_test(A.A, 3, 12) < 1e-14);
  CHECK(dot_test(A.inv_sqrt(2e-3), 3, 13) < 1e-14);
  Gather x = random_gather(d.src_spec(), 14);
  Gather ab = A.A.apply(A.inv_sqrt(1e-3).apply(x));
  Gather ba = A.inv_sqrt(1e-3).apply(A.A.apply(x));
  CHECK(rel_l2(ab, ba) < 1e-15);
}

TEST_CASE("energy of a uniform pressure field matches the closed-form integral") {
  Medium m = Medium::homogeneous(Grid2D(401, 201, 20.0, 20.0), 4.0e9, 1000.0);
  AcousticState st(m.grid);
  for (int i = 0; i < 401; ++i)
    for (int j = 0; j < 201; ++j) st.pz(i, j) = 1.0;
  // 0.5 * (1/4e9) * 8000 * 4000
  CHECK(energy(st, m) == doctest::Approx(4.0e-3).epsilon(1e-12));
  CHECK(energy(AcousticState(m.grid), m) == 0.0);
}

TEST_CASE("dot test harness flags a broken adjoint") {
  testcfg::Desk d;
  GatherSpec spec = d.src_spec();
  LinearOp broken{spec, spec, "broken",
                  [](const Gather& g) { return gather_scale(2.0, g); },
                  [](const Gather& g) { return gather_scale(3.0, g); }};
  // a genuine break sits at the random-correlation floor ~1/sqrt(N),
  // orders of magnitude above the rounding level of a correct pair
  CHECK(dot_test(broken, 2, 15) > 1e-6);
  CHECK(dot_test(identity_op(spec), 2, 16) < 1e-15);
}

TEST_CASE("approximate inverse: 4 V^T S is close to the identity in the aperture cone") {
  Scenario scn = testcfg::mini_scenario(false);
  const DowngoingFields& df = testcfg::mini_fields();
  OpConfig cfg = testcfg::mini_op(scn);
  LinearOp S = make_S(cfg);
  LinearOp V = make_V(cfg);
  // dips too steep to reach the receivers are invisible to S and cannot be
  // recovered; one round trip projects h onto the aperture cone, where the
  // composition must act as the identity
  Gather h_cone = gather_scale(4.0, V.adjoint_apply(S.apply(df.h_s)));
  Gather recovered = gather_scale(4.0, V.adjoint_apply(S.apply(h_cone)));
  CHECK(inband_rel_l2(recovered, h_cone, 2.0, 5.0, 15.0, 25.0, 8) < 0.25);
}

}  // TEST_SUITE
