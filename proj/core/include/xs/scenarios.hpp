#pragma once

#include "xs/fdtd.hpp"

namespace xs {

/// Reference experiment: 8 km x 4 km model at 20 m spacing, receiver line
/// at 1000 m depth, extended-source line at 3000 m, buried point source at
/// (3500, 3500) m, band-limited wavelet with corners (1, 2.5, 7.5, 12.5) Hz.
struct Scenario {
  std::string name;
  Medium medium;
  FdScheme scheme;
  TimeAxis time;
  double z_src = 0.0;  // extended-source line
  double z_rec = 0.0;  // receiver line
  std::vector<double> x_coords;
  double point_x = 0.0, point_z = 0.0;  // buried physical source
  std::vector<double> wavelet;          // sampled on `time`
  double alpha = 0.0;
  double x_penalty_center = 0.0;
  double delta_z = 0.0;  // auxiliary-datum offset for thin-slab operators

  GatherSpec src_spec() const { return GatherSpec(z_src, x_coords, time); }
  GatherSpec rec_spec() const { return GatherSpec(z_rec, x_coords, time); }
};

/// 401 x 201 nodes at 20 m: kappa = 4 GPa, rho = 1000 kg/m^3 (c = 2 km/s).
Medium build_homogeneous();

/// Homogeneous background with a radially symmetric low-modulus lens at the
/// domain center: kappa drops to 1.6 GPa at the center over radius R.
Medium build_lens(double radius_m = 600.0);

/// Zero-phase trapezoidal-spectrum wavelet sampled on (nt, dt) with the
/// peak at t = 0; time axis starts at t0. Peak-normalized to 1.
std::vector<double> bandpass_wavelet(double f1, double f2, double f3, double f4,
                                     double dt, int nt, double t0);

/// Named presets: "paper-homog" and "paper-lens".
Scenario make_scenario(const std::string& name);

/// Everything the buried point source produces on the acquisition lines.
struct DowngoingFields {
  Gather ps_p;   // pressure trace on the source line
  Gather ps_vz;  // vertical velocity trace on the source line
  Gather h_s;    // -2 ps_vz, constitutive-defect source
  Gather f_s;    // -2 ps_p, vertical-load source
  Gather d;      // pressure data on the receiver line
};

DowngoingFields make_downgoing_sources(const Scenario& scn);

}  // namespace xs
