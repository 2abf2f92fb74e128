#include <cmath>
#include <complex>

#include "doctest.h"
#include "support/testconfig.hpp"
#include "xs/scenarios.hpp"
#include "xs/spectral.hpp"

using namespace xs;

namespace {
// direct DFT magnitude, dt-weighted (continuum convention)
double spectrum_mag(const std::vector<double>& w, double dt, double t0, double f) {
  std::complex<double> acc = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    double t = t0 + n * dt;
    acc += w[n] * std::exp(std::complex<double>(0.0, -2.0 * M_PI * f * t));
  }
  return std::abs(acc) * dt;
}
}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("homogeneous model constants") {
  Medium m = build_homogeneous();
  CHECK(m.grid.nx == 401);
  CHECK(m.grid.nz == 201);
  CHECK(m.grid.dx == 20.0);
  CHECK(m.grid.x_max() == doctest::Approx(8000.0));
  CHECK(m.grid.z_max() == doctest::Approx(4000.0));
  double kmin = 1e30, kmax = 0.0;
  for (int i = 0; i < m.grid.nx; ++i)
    for (int j = 0; j < m.grid.nz; ++j) {
      kmin = std::min(kmin, m.kappa(i, j));
      kmax = std::max(kmax, m.kappa(i, j));
    }
  CHECK(kmin == 4.0e9);
  CHECK(kmax == 4.0e9);
  CHECK(m.celerity(100, 100) == doctest::Approx(2000.0));
}

TEST_CASE("lens model profile") {
  Medium m = build_lens();
  CHECK(m.kappa(200, 100) == doctest::Approx(1.6e9));            // center (4000, 2000)
  CHECK(m.kappa(200, 100 + 31) == doctest::Approx(4.0e9));       // 620 m below center
  CHECK(m.kappa(0, 0) == doctest::Approx(4.0e9));
  for (int i = 150; i < 250; i += 7)
    for (int j = 50; j < 150; j += 7) CHECK(m.rho(i, j) == 1000.0);
}

TEST_CASE("lens and homogeneous media agree outside the lens") {
  Medium lens = build_lens();
  Medium homog = build_homogeneous();
  // identical below z = 2620 m (thin-slab crop bottom) and above the lens top
  for (int i = 0; i < lens.grid.nx; i += 3)
    for (int j = 131; j < lens.grid.nz; ++j)
      CHECK(lens.kappa(i, j) == homog.kappa(i, j));
  for (int i = 0; i < lens.grid.nx; i += 3)
    for (int j = 0; j <= 69; ++j) CHECK(lens.kappa(i, j) == homog.kappa(i, j));
}

TEST_CASE("wavelet: peak normalization, band edges, and zero mean") {
  double dt = 4.9e-3;
  int nt = 1123;
  double t0 = -2.0;
  std::vector<double> w = bandpass_wavelet(1.0, 2.5, 7.5, 12.5, dt, nt, t0);
  double peak = 0.0;
  int peak_idx = 0;
  for (int n = 0; n < nt; ++n)
    if (std::abs(w[n]) > peak) {
      peak = std::abs(w[n]);
      peak_idx = n;
    }
  CHECK(peak == doctest::Approx(1.0));
  CHECK(std::abs(t0 + peak_idx * dt) < dt / 2);  // peak at t = 0

  double mid = spectrum_mag(w, dt, t0, 5.0);
  CHECK(spectrum_mag(w, dt, t0, 12.5) < 1e-3 * mid);
  CHECK(spectrum_mag(w, dt, t0, 15.0) < 1e-3 * mid);
  CHECK(spectrum_mag(w, dt, t0, 1.0) < 1e-3 * mid);
  // flat passband
  CHECK(spectrum_mag(w, dt, t0, 3.5) == doctest::Approx(mid).epsilon(1e-3));
  double integral = 0.0;
  for (double v : w) integral += v;
  CHECK(std::abs(integral * dt) < 1e-3 * peak);
  // endpoints decayed
  CHECK(std::abs(w.front()) < 1e-3);
  CHECK(std::abs(w.back()) < 1e-3);
}

TEST_CASE("wavelet corner validation") {
  CHECK_THROWS_AS(bandpass_wavelet(2.0, 1.0, 7.5, 12.5, 4.9e-3, 100, 0.0), ConfigError);
  CHECK_THROWS_AS(bandpass_wavelet(1.0, 2.5, 7.5, 200.0, 4.9e-3, 100, 0.0), ConfigError);
}

TEST_CASE("preset geometry constants") {
  Scenario s = make_scenario("paper-lens");
  CHECK(s.z_rec == 1000.0);
  CHECK(s.z_src == 3000.0);
  CHECK(s.point_x == 3500.0);
  CHECK(s.point_z == 3500.0);
  CHECK(s.x_coords.size() == 201);
  CHECK(s.x_coords.front() == 2000.0);
  CHECK(s.x_coords.back() == 6000.0);
  CHECK(s.x_coords[80] == 3600.0);  // trace 81 in 1-based figure numbering
  CHECK(s.x_penalty_center == 3500.0);
  CHECK(s.scheme.half_order == 4);
  CHECK(s.time.dt == 4.9e-3);
  CHECK_THROWS_AS(make_scenario("nope"), ConfigError);
}

TEST_CASE("mini downgoing construction: ray time, slowness cone, equivalence") {
  Scenario s = testcfg::mini_scenario(false);
  const DowngoingFields& df = testcfg::mini_fields();

  // the zero-phase arrival peaks at the ray time: distance 1100 m at 2 km/s
  int itr = 40;  // x = 1600
  double expect_t = (s.point_z - s.z_rec) / 2000.0;
  int peak = 0;
  for (int n = 0; n < df.d.nt(); ++n)
    if (std::abs(df.d.at(itr, n)) > std::abs(df.d.at(itr, peak))) peak = n;
  double dominant_period = 1.0 / 8.0;  // center of the 5-15 Hz passband
  CHECK(std::abs(df.d.time().t(peak) - expect_t) < dominant_period);

  // downgoing: spectral energy essentially confined to the propagation
  // cone (evanescent near-field straddles the exact cutoff)
  CHECK(out_of_cone_energy_fraction(df.h_s, 1.05 / 2000.0) < 0.01);

  // defect and load sources generate the same receiver gather in band
  auto rec_h = propagate(SourceVector(df.h_s, Gather(df.h_s.spec())), {s.z_rec}, s.x_coords,
                         s.medium, s.scheme, s.time, Direction::causal);
  auto rec_f = propagate(SourceVector(Gather(df.f_s.spec()), df.f_s), {s.z_rec}, s.x_coords,
                         s.medium, s.scheme, s.time, Direction::causal);
  CHECK(inband_rel_l2(rec_h[0].p, rec_f[0].p, 2.0, 5.0, 15.0, 25.0, 8) < 0.15);
  // and both reproduce the point-source data
  CHECK(inband_rel_l2(rec_h[0].p, df.d, 2.0, 5.0, 15.0, 25.0, 8) < 0.15);
}

TEST_CASE("paper preset smoke run: first arrival and gather shapes") {
  Scenario s = make_scenario("paper-homog");
  DowngoingFields df = make_downgoing_sources(s);
  CHECK(df.d.ntr() == 201);
  CHECK(df.h_s.depth() == 3000.0);
  CHECK(df.d.depth() == 1000.0);

  // ray time from (3500, 3500) to the receiver at x = 3500: 2500 m / 2 km/s;
  // the zero-phase arrival peaks there
  int itr = 75;  // x = 3500
  int peak = 0;
  for (int n = 0; n < df.d.nt(); ++n)
    if (std::abs(df.d.at(itr, n)) > std::abs(df.d.at(itr, peak))) peak = n;
  CHECK(std::abs(df.d.time().t(peak) - 1.25) < 0.2);  // one dominant period
  CHECK(out_of_cone_energy_fraction(df.h_s, 1.05 / 2000.0) < 0.01);
}

}  // TEST_SUITE
