#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "xs/fd_scheme.hpp"
#include "xs/gather.hpp"
#include "xs/grid.hpp"

namespace xs {

enum class Direction { causal, anticausal };
enum class Component { p, vz };

/// Staggered acoustic state. Pressure is stored split (p = px + pz); the
/// split components double as the absorbing-layer memory variables.
/// vx lives on x-faces ((nx-1) x nz), vz on z-faces (nx x (nz-1)).
struct AcousticState {
  Grid2D grid;
  Field2D px, pz, vx, vz;

  explicit AcousticState(const Grid2D& g)
      : grid(g),
        px(g.nx, g.nz),
        pz(g.nx, g.nz),
        vx(g.nx - 1, g.nz),
        vz(g.nx, g.nz - 1) {}

  Field2D pressure() const {
    Field2D p(grid.nx, grid.nz);
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.nz; ++j) p(i, j) = px(i, j) + pz(i, j);
    return p;
  }
  bool all_finite() const {
    return px.all_finite() && pz.all_finite() && vx.all_finite() && vz.all_finite();
  }
  double max_abs() const {
    return std::max(std::max(px.max_abs(), pz.max_abs()),
                    std::max(vx.max_abs(), vz.max_abs()));
  }
};

/// One leapfrog step: velocity half-step from grad p, then pressure from
/// div v, with the boundary-layer damping applied semi-implicitly.
/// dt > 0 marches causally, dt < 0 anti-causally.
void step_inplace(AcousticState& state, const Medium& medium, const FdScheme& scheme,
                  double dt_signed);

AcousticState step(const AcousticState& state, const Medium& medium, const FdScheme& scheme,
                   double dt_signed);

/// Interpolated read of one component along a fixed-depth line.
std::vector<double> sample(const AcousticState& state, Component comp, double depth_z,
                           const std::vector<double>& x_coords, const FdScheme& scheme);

/// Exact transpose of sample with respect to the (dx dz | dx) pairings:
/// adds (1/dz) W^T vals into the field, W the interpolation weights.
void spread(AcousticState& state, Component comp, double depth_z,
            const std::vector<double>& x_coords, const std::vector<double>& vals,
            const FdScheme& scheme);

/// Adds one time step's worth of surface source into the state:
/// h scaled by kappa*dt/dz into the pressure path, f by dt/(rho*dz) into vz,
/// both spread by the transpose of linear interpolation.
void inject(AcousticState& state, const SourceVector& sv, int time_index, double dt,
            const Medium& medium, const FdScheme& scheme);

struct PropagationConfig {
  Medium medium;
  FdScheme scheme;
  TimeAxis time;
  GatherSpec source_spec;              // surface-source line (depth + trace x)
  std::vector<double> record_depths;   // one (p, vz) pair per depth
  std::vector<double> record_x;
  Direction direction = Direction::causal;
};

struct RecordedGathers {
  Gather p;
  Gather vz;
};

using StepObserver = std::function<void(int step_index, const AcousticState&)>;

/// The discretized surface-source modeling map: full time loop from zero
/// initial state, injecting (h, f) every step, recording p and vz gathers
/// at every requested depth. adjoint() is the exact algebraic transpose
/// with respect to the gather inner products.
class SurfacePropagator {
public:
  explicit SurfacePropagator(PropagationConfig cfg);
  ~SurfacePropagator();
  SurfacePropagator(const SurfacePropagator&) = delete;
  SurfacePropagator& operator=(const SurfacePropagator&) = delete;

  const PropagationConfig& config() const;
  GatherSpec record_spec(int which_depth) const;

  std::vector<RecordedGathers> forward(const SourceVector& src,
                                       const StepObserver& obs = {}) const;
  SourceVector adjoint(const std::vector<RecordedGathers>& residuals) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<RecordedGathers> propagate(const SourceVector& source,
                                       const std::vector<double>& record_depths,
                                       const std::vector<double>& record_x,
                                       const Medium& medium, const FdScheme& scheme,
                                       const TimeAxis& time, Direction direction,
                                       const StepObserver& obs = {});

SourceVector adjoint_propagate(const PropagationConfig& cfg,
                               const std::vector<RecordedGathers>& residuals);

/// Margin (in cells) between the grid edge and the usable interior:
/// stencil frame + absorbing layer + one spare cell for interpolation.
int interior_margin_cells(const FdScheme& scheme, double d);

void check_interior(const Grid2D& grid, const FdScheme& scheme, double x, double z,
                    const char* what);

}  // namespace xs
