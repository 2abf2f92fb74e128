#include "xs/fd_scheme.hpp"

#include <cmath>

namespace xs {

std::vector<double> staggered_coefficients(int k) {
  if (k < 1 || k > 7) throw ConfigError("staggered_coefficients: k must be in [1, 7]");
  std::vector<double> a(k);
  for (int m = 1; m <= k; ++m) {
    double prod = 1.0;
    for (int n = 1; n <= k; ++n) {
      if (n == m) continue;
      double num = (2.0 * n - 1) * (2.0 * n - 1);
      double den = std::abs((2.0 * m - 1) * (2.0 * m - 1) - (2.0 * n - 1) * (2.0 * n - 1));
      prod *= num / den;
    }
    a[m - 1] = ((m % 2 == 1) ? 1.0 : -1.0) / (2.0 * m - 1) * prod;
  }
  return a;
}

double staggered_coefficient_abs_sum(int k) {
  double s = 0.0;
  for (double c : staggered_coefficients(k)) s += std::abs(c);
  return s;
}

double stable_dt(const Medium& medium, const FdScheme& scheme) {
  scheme.validate();
  double s = staggered_coefficient_abs_sum(scheme.half_order);
  double inv_h = std::sqrt(1.0 / (medium.grid.dx * medium.grid.dx) +
                           1.0 / (medium.grid.dz * medium.grid.dz));
  return scheme.cfl_safety / (medium.c_max() * s * inv_h);
}

}  // namespace xs
