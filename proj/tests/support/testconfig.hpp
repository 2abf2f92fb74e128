#pragma once

#include <vector>

#include "xs/fd_scheme.hpp"
#include "xs/fdtd.hpp"
#include "xs/scenarios.hpp"
#include "xs/wave_ops.hpp"

namespace testcfg {

// Small homogeneous setup fast enough for adjoint and property tests:
// 2.4 km x 1.6 km at 20 m, c = 2000 m/s, sources at 700 m over receivers
// at 400 m, 7 traces.
struct Desk {
  xs::Medium medium = xs::Medium::homogeneous(xs::Grid2D(121, 81, 20.0, 20.0), 4.0e9, 1000.0);
  xs::FdScheme scheme{4, 0.9, 160.0, 1e-4};
  xs::TimeAxis time{150, 4.9e-3, 0.0};
  double z_src = 700.0;
  double z_rec = 400.0;
  std::vector<double> x_coords{900, 1000, 1100, 1200, 1300, 1400, 1500};

  xs::GatherSpec src_spec() const { return xs::GatherSpec(z_src, x_coords, time); }
  xs::GatherSpec rec_spec() const { return xs::GatherSpec(z_rec, x_coords, time); }
};

// Reduced analog of the reference experiment for integration tests:
// same physics, quarter-size geometry, short wavelet band.
inline xs::Scenario mini_scenario(bool lens = false) {
  xs::Scenario s;
  s.name = lens ? "mini-lens" : "mini-homog";
  xs::Grid2D g(161, 101, 20.0, 20.0, 0.0, 0.0);
  xs::Field2D kappa(g.nx, g.nz, 4.0e9), rho(g.nx, g.nz, 1000.0);
  if (lens) {
    const double cx = 1600.0, cz = 1000.0, R = 300.0;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nz; ++j) {
        double r = std::hypot(g.x(i) - cx, g.z(j) - cz);
        if (r < R) {
          double b = std::cos(0.5 * M_PI * r / R);
          kappa(i, j) = 4.0e9 - 2.4e9 * b * b;
        }
      }
  }
  s.medium = xs::Medium(g, std::move(kappa), std::move(rho));
  s.scheme = xs::FdScheme(4, 0.9, 160.0, 1e-4);
  const double dt = 4.9e-3;
  const double t0 = -0.8, t1 = 1.4;
  const int nt = static_cast<int>(std::floor((t1 - t0) / dt)) + 1;
  s.time = xs::TimeAxis(nt, dt, t0);
  s.z_src = 1400.0;
  s.z_rec = 600.0;
  for (int r = 0; r < 81; ++r) s.x_coords.push_back(800.0 + 20.0 * r);
  s.point_x = 1600.0;
  s.point_z = 1700.0;
  s.wavelet = xs::bandpass_wavelet(2.0, 5.0, 15.0, 25.0, dt, nt, t0);
  s.alpha = 0.0;
  s.x_penalty_center = 1600.0;
  s.delta_z = -100.0;
  return s;
}

inline xs::OpConfig mini_op(const xs::Scenario& s,
                            xs::Direction dir = xs::Direction::causal) {
  return xs::OpConfig{s.medium, s.scheme, s.z_src, s.z_rec, s.x_coords, s.time, dir};
}

// Gaussian-windowed monochromatic plane wave: frequency f0, horizontal
// slowness sqrt(s_ratio)/c where s_ratio = kappa xi^2 / (rho omega^2).
inline xs::Gather plane_probe(const xs::GatherSpec& spec, double f0, double s_ratio,
                              double c, double x_center, double sigma_x, double t_center,
                              double sigma_t) {
  xs::Gather g(spec);
  double slowness = std::sqrt(s_ratio) / c;
  for (int r = 0; r < g.ntr(); ++r) {
    double x = spec.x[r];
    double wx = std::exp(-0.5 * std::pow((x - x_center) / sigma_x, 2));
    for (int n = 0; n < g.nt(); ++n) {
      double t = spec.time.t(n);
      double phase = 2.0 * M_PI * f0 * (t - t_center - slowness * (x - x_center));
      double wt = std::exp(-0.5 * std::pow((t - t_center) / sigma_t, 2));
      g.at(r, n) = wx * wt * std::cos(phase);
    }
  }
  return g;
}

// Downgoing fields of the mini scenario, computed once per process.
inline const xs::DowngoingFields& mini_fields() {
  static const xs::DowngoingFields f = xs::make_downgoing_sources(mini_scenario(false));
  return f;
}

}  // namespace testcfg
