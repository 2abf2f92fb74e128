#pragma once

#include "xs/fdtd.hpp"
#include "xs/linear_op.hpp"

namespace xs {

/// Geometry and discretization of one modeling operator: sources on the
/// line z = z_src, traces read on z = z_rec, shared trace positions and
/// time axis.
struct OpConfig {
  Medium medium;
  FdScheme scheme;
  double z_src = 0.0;
  double z_rec = 0.0;
  std::vector<double> x_coords;
  TimeAxis time;
  Direction direction = Direction::causal;

  void validate() const;
  GatherSpec src_spec() const { return GatherSpec(z_src, x_coords, time); }
  GatherSpec rec_spec() const { return GatherSpec(z_rec, x_coords, time); }
};

enum class SourceSlot { h, f };
enum class TraceSlot { p, vz };

/// One block of the two-by-two surface-source modeling operator: the
/// selected source component in, the selected trace component out.
LinearOp make_block(const OpConfig& cfg, SourceSlot from, TraceSlot to);

/// Pressure source to pressure trace (the diagonal h -> p block).
LinearOp make_S(const OpConfig& cfg);

/// Vertical load to vertical velocity trace (the f -> vz block).
LinearOp make_V(const OpConfig& cfg);

LinearOp make_S_offdiag(const OpConfig& cfg, SourceSlot from, TraceSlot to);

/// Both source slots to both trace components in one sweep.
RecordedGathers apply_full(const OpConfig& cfg, const SourceVector& sv);
SourceVector apply_full_adjoint(const OpConfig& cfg, const RecordedGathers& res);

/// Time reversal as a self-adjoint involution on gathers.
LinearOp make_R(const GatherSpec& spec);

/// Penalty: multiplication by the in-line distance to the physical source.
/// Exposes the operator itself plus its diagonal relatives.
struct PenaltyOp {
  LinearOp A;         // u(x,t) -> |x - x_src| u(x,t)
  LinearOp AtA;       // (x - x_src)^2
  /// (I + alpha^2 A^T A)^(-1/2), diagonal.
  LinearOp inv_sqrt(double alpha) const;

  GatherSpec spec;
  double x_src = 0.0;
};

PenaltyOp make_A(double x_src, const GatherSpec& spec);

/// Total acoustic energy 0.5 * integral(p^2/kappa + rho |v|^2) dx dz by
/// midpoint quadrature: trapezoid node weights for the pressure term,
/// face-centered cells with averaged density for the velocity terms.
double energy(const AcousticState& state, const Medium& medium);

/// Relative L2 difference after bandpass filtering and edge-trace exclusion.
double inband_rel_l2(const Gather& a, const Gather& b, double f1, double f2, double f3,
                     double f4, int edge_traces);

}  // namespace xs
