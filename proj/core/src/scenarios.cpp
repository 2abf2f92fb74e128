#include "xs/scenarios.hpp"

#include <cmath>

#include "xs/spectral.hpp"

namespace xs {

namespace {
constexpr double kKappa = 4.0e9;   // Pa
constexpr double kRho = 1000.0;    // kg/m^3
constexpr double kDx = 20.0;       // m
constexpr int kNx = 401;           // 8000 m
constexpr int kNz = 201;           // 4000 m
constexpr double kLensKappaCenter = 1.6e9;
}  // namespace

Medium build_homogeneous() {
  Grid2D g(kNx, kNz, kDx, kDx, 0.0, 0.0);
  return Medium::homogeneous(g, kKappa, kRho);
}

Medium build_lens(double radius_m) {
  Medium m = build_homogeneous();
  const double cx = 4000.0, cz = 2000.0;
  const double drop = kKappa - kLensKappaCenter;
  Field2D k = m.kappa;
  for (int i = 0; i < m.grid.nx; ++i)
    for (int j = 0; j < m.grid.nz; ++j) {
      double r = std::hypot(m.grid.x(i) - cx, m.grid.z(j) - cz);
      double s = r / radius_m;
      if (s < 1.0) {
        double bump = std::cos(0.5 * M_PI * s);
        k(i, j) = kKappa - drop * bump * bump;
      }
    }
  return Medium(m.grid, std::move(k), m.rho);
}

std::vector<double> bandpass_wavelet(double f1, double f2, double f3, double f4,
                                     double dt, int nt, double t0) {
  if (!(0.0 <= f1 && f1 < f2 && f2 < f3 && f3 < f4))
    throw ConfigError("bandpass_wavelet: corner frequencies must satisfy 0 <= f1 < f2 < f3 < f4");
  if (f4 >= 0.5 / dt)
    throw ConfigError("bandpass_wavelet: f4 must be below the Nyquist frequency");
  // Cosine-sum quadrature of the real, even spectrum; fine frequency grid so
  // the quadrature error sits far below the stopband target.
  const int nf = 4001;
  const double df = f4 / (nf - 1);
  std::vector<double> w(nt, 0.0);
  for (int n = 0; n < nt; ++n) {
    double t = t0 + n * dt;
    double acc = 0.0;
    for (int q = 0; q < nf; ++q) {
      double f = q * df;
      double a = trapezoid_taper(f, f1, f2, f3, f4);
      double wq = (q == 0 || q == nf - 1) ? 0.5 : 1.0;
      acc += wq * a * std::cos(2.0 * M_PI * f * t);
    }
    w[n] = 2.0 * acc * df;
  }
  double peak = 0.0;
  for (double v : w) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : w) v /= peak;
  return w;
}

Scenario make_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "paper-homog")
    s.medium = build_homogeneous();
  else if (name == "paper-lens")
    s.medium = build_lens();
  else
    throw ConfigError("unknown scenario '" + name + "' (expected paper-homog or paper-lens)");

  s.scheme = FdScheme(4, 0.9, 200.0, 1e-4);
  // 4.9 ms sits just under the k=4 stability bound (5.497 ms) and keeps the
  // gather headers compact.
  const double dt = 4.9e-3;
  const double t0 = -2.0, t1 = 3.5;
  const int nt = static_cast<int>(std::floor((t1 - t0) / dt)) + 1;
  s.time = TimeAxis(nt, dt, t0);

  s.z_src = 3000.0;
  s.z_rec = 1000.0;
  for (int r = 0; r < 201; ++r) s.x_coords.push_back(2000.0 + 20.0 * r);
  s.point_x = 3500.0;
  s.point_z = 3500.0;
  s.wavelet = bandpass_wavelet(1.0, 2.5, 7.5, 12.5, dt, nt, t0);
  s.alpha = 0.0;
  s.x_penalty_center = 3500.0;
  s.delta_z = -100.0;  // auxiliary datum 100 m above each surface
  return s;
}

DowngoingFields make_downgoing_sources(const Scenario& scn) {
  if (!(scn.point_z > scn.z_src) || !(scn.z_rec < scn.z_src))
    throw ConfigError("make_downgoing_sources: expects z_rec < z_src < point_z");
  GatherSpec point_spec(scn.point_z, {scn.point_x}, scn.time);
  SourceVector point = SourceVector::zeros(point_spec);
  for (int n = 0; n < scn.time.nt; ++n) point.h.at(0, n) = scn.wavelet[n];

  auto rec = propagate(point, {scn.z_src, scn.z_rec}, scn.x_coords, scn.medium, scn.scheme,
                       scn.time, Direction::causal);
  DowngoingFields out{rec[0].p, rec[0].vz, gather_scale(-2.0, rec[0].vz),
                      gather_scale(-2.0, rec[0].p), rec[1].p};
  return out;
}

}  // namespace xs
