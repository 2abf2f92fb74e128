#pragma once

#include <vector>

#include "xs/grid.hpp"

namespace xs {

/// Staggered-grid scheme parameters: order 2 in time, 2k in space, with a
/// split-field absorbing layer on all four sides.
struct FdScheme {
  int half_order = 4;        // k, space order 2k
  double cfl_safety = 0.9;   // in (0, 1]
  double pml_width = 200.0;  // m per side
  double pml_r0 = 1e-4;      // target boundary reflection coefficient

  FdScheme() = default;
  FdScheme(int k, double safety, double width_m, double r0)
      : half_order(k), cfl_safety(safety), pml_width(width_m), pml_r0(r0) {
    validate();
  }
  void validate() const {
    if (half_order < 1 || half_order > 7)
      throw ConfigError("FdScheme: half_order must be in [1, 7]");
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
      throw ConfigError("FdScheme: cfl_safety must be in (0, 1]");
    if (pml_width < 0.0) throw ConfigError("FdScheme: pml_width must be >= 0");
    if (!(pml_r0 > 0.0) || pml_r0 >= 1.0)
      throw ConfigError("FdScheme: pml_r0 must be in (0, 1)");
  }

  int pml_cells(double d) const { return static_cast<int>(std::lround(pml_width / d)); }
};

/// Taylor coefficients a_1..a_k of the order-2k staggered first derivative:
/// f'(x) ~ (1/h) sum_m a_m (f(x + (2m-1)h/2) - f(x - (2m-1)h/2)).
std::vector<double> staggered_coefficients(int k);

double staggered_coefficient_abs_sum(int k);

/// Von Neumann bound for the leapfrog scheme, scaled by cfl_safety:
/// dt = safety / (c_max * sum|a_m| * sqrt(1/dx^2 + 1/dz^2)).
double stable_dt(const Medium& medium, const FdScheme& scheme);

}  // namespace xs
