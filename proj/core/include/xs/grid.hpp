#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "xs/common.hpp"

namespace xs {

/// Rectangular lattice of pressure nodes. Staggered velocity nodes sit
/// half a cell off this lattice (x-faces in x, z-faces in z).
struct Grid2D {
  int nx = 0;
  int nz = 0;
  double dx = 0.0;  // m
  double dz = 0.0;  // m
  double x0 = 0.0;  // m, x of node i=0
  double z0 = 0.0;  // m, z of node j=0

  Grid2D() = default;
  Grid2D(int nx_, int nz_, double dx_, double dz_, double x0_ = 0.0, double z0_ = 0.0)
      : nx(nx_), nz(nz_), dx(dx_), dz(dz_), x0(x0_), z0(z0_) {
    if (nx < 2 || nz < 2) throw ConfigError("Grid2D: nx and nz must be >= 2");
    if (!(dx > 0.0) || !(dz > 0.0)) throw ConfigError("Grid2D: dx and dz must be positive");
  }

  double x(int i) const { return x0 + i * dx; }
  double z(int j) const { return z0 + j * dz; }
  double x_max() const { return x0 + (nx - 1) * dx; }
  double z_max() const { return z0 + (nz - 1) * dz; }
  std::size_t nodes() const { return static_cast<std::size_t>(nx) * nz; }

  bool operator==(const Grid2D&) const = default;
};

/// Scalar field on the pressure-node lattice, x-major with z contiguous.
class Field2D {
public:
  Field2D() = default;
  Field2D(int nx, int nz, double fill = 0.0)
      : nx_(nx), nz_(nz), v_(static_cast<std::size_t>(nx) * nz, fill) {}

  int nx() const { return nx_; }
  int nz() const { return nz_; }
  std::size_t size() const { return v_.size(); }

  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(i) * nz_ + j]; }
  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * nz_ + j]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }
  bool all_finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) return false;
    return true;
  }
  void fill(double a) { v_.assign(v_.size(), a); }

  bool operator==(const Field2D&) const = default;

private:
  int nx_ = 0;
  int nz_ = 0;
  std::vector<double> v_;
};

/// Bulk modulus and density on pressure nodes. The FD kernel averages
/// density onto the staggered faces.
struct Medium {
  Grid2D grid;
  Field2D kappa;  // Pa
  Field2D rho;    // kg/m^3

  Medium() = default;
  Medium(Grid2D g, Field2D k, Field2D r)
      : grid(g), kappa(std::move(k)), rho(std::move(r)) {
    if (kappa.nx() != grid.nx || kappa.nz() != grid.nz)
      throw ShapeError("Medium: kappa field does not match grid");
    if (rho.nx() != grid.nx || rho.nz() != grid.nz)
      throw ShapeError("Medium: rho field does not match grid");
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.nz; ++j) {
        if (!(kappa(i, j) > 0.0) || !std::isfinite(kappa(i, j)))
          throw ConfigError("Medium: kappa must be positive and finite");
        if (!(rho(i, j) > 0.0) || !std::isfinite(rho(i, j)))
          throw ConfigError("Medium: rho must be positive and finite");
      }
  }

  static Medium homogeneous(Grid2D g, double kappa_pa, double rho_kgm3) {
    return Medium(g, Field2D(g.nx, g.nz, kappa_pa), Field2D(g.nx, g.nz, rho_kgm3));
  }

  double celerity(int i, int j) const { return std::sqrt(kappa(i, j) / rho(i, j)); }

  double c_max() const {
    double m = 0.0;
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.nz; ++j) m = std::max(m, celerity(i, j));
    return m;
  }

  /// Restriction to node rows [j_lo, j_hi], keeping the full x extent.
  Medium crop_z(int j_lo, int j_hi) const {
    if (j_lo < 0 || j_hi >= grid.nz || j_hi - j_lo + 1 < 2)
      throw ConfigError("Medium::crop_z: row range out of bounds");
    Grid2D g(grid.nx, j_hi - j_lo + 1, grid.dx, grid.dz, grid.x0, grid.z(j_lo));
    Field2D k(g.nx, g.nz), r(g.nx, g.nz);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nz; ++j) {
        k(i, j) = kappa(i, j + j_lo);
        r(i, j) = rho(i, j + j_lo);
      }
    return Medium(g, std::move(k), std::move(r));
  }
};

}  // namespace xs
