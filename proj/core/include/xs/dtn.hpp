#pragma once

#include "xs/wave_ops.hpp"

namespace xs {

/// Thin-slab configuration for the pressure-to-source operator: traces on
/// z = z_surface, auxiliary datum at z_surface + delta_z (delta_z signed,
/// normally pointing toward the opposing surface, i.e. the side the
/// downgoing energy crosses into).
struct SlabConfig {
  double z_surface = 0.0;
  double delta_z = 0.0;  // m, |delta_z| >= 2 dz
  std::vector<double> x_coords;
  TimeAxis time;
  Medium medium;
  FdScheme scheme;
  bool crop = true;  // run on a cropped slab-plus-margins domain

  void validate() const;
  GatherSpec surface_spec() const { return GatherSpec(z_surface, x_coords, time); }
};

/// The medium (possibly cropped) and operator geometry a slab op runs on.
struct SlabDomain {
  Medium medium;
  OpConfig cfg;
};

SlabDomain make_slab_domain(const SlabConfig& cfg);

/// Pressure-to-source map computed by thin-slab propagation:
/// apply = -8 V^T Pi0 S Pi1^T over the slab; adjoint_apply is the exact
/// transpose of that composition.
LinearOp lambda_tilde(const SlabConfig& cfg);

/// Symmetrized pressure-to-source weight: one forward sweep recording both
/// components at the auxiliary datum, component swap, one adjoint sweep,
/// scaled by -4. Exactly self-adjoint by construction.
LinearOp wm_inv(const SlabConfig& cfg);

/// Symmetrized inverse weight over the full source-to-receiver path:
/// -Pi0 S^T (swap) S Pi0^T. Exactly self-adjoint.
LinearOp wm(const OpConfig& cfg);

/// Data-space weight: wm_inv anchored at the receiver surface.
LinearOp wd(const SlabConfig& cfg);

}  // namespace xs
