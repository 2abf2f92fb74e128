#include "xs/wave_ops.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "xs/spectral.hpp"

namespace xs {

void OpConfig::validate() const {
  scheme.validate();
  if (z_src == z_rec) throw ConfigError("OpConfig: z_src must differ from z_rec");
  for (double x : x_coords) {
    check_interior(medium.grid, scheme, x, z_src, "source trace");
    check_interior(medium.grid, scheme, x, z_rec, "record trace");
  }
  if (time.dt > stable_dt(medium, FdScheme(scheme.half_order, 1.0, scheme.pml_width,
                                           scheme.pml_r0)))
    throw ConfigError("OpConfig: time step violates the stability bound");
}

namespace {
std::shared_ptr<const SurfacePropagator> make_propagator(const OpConfig& cfg) {
  cfg.validate();
  PropagationConfig pc{cfg.medium, cfg.scheme,          cfg.time, cfg.src_spec(),
                       {cfg.z_rec}, cfg.x_coords, cfg.direction};
  return std::make_shared<const SurfacePropagator>(std::move(pc));
}

const char* slot_name(SourceSlot s) { return s == SourceSlot::h ? "h" : "f"; }
const char* slot_name(TraceSlot s) { return s == TraceSlot::p ? "p" : "vz"; }
}  // namespace

LinearOp make_block(const OpConfig& cfg, SourceSlot from, TraceSlot to) {
  auto prop = make_propagator(cfg);
  GatherSpec dom = cfg.src_spec();
  GatherSpec ran = cfg.rec_spec();
  std::string label = std::string("S[") + slot_name(from) + "->" + slot_name(to) + "]";
  auto apply = [prop, from, to, dom](const Gather& g) {
    SourceVector sv = SourceVector::zeros(dom);
    (from == SourceSlot::h ? sv.h : sv.f) = Gather(dom, g.values());
    auto rec = prop->forward(sv);
    return to == TraceSlot::p ? std::move(rec[0].p) : std::move(rec[0].vz);
  };
  auto adj = [prop, from, to, ran](const Gather& g) {
    GatherSpec rs = prop->record_spec(0);
    RecordedGathers res{Gather(rs), Gather(rs)};
    (to == TraceSlot::p ? res.p : res.vz) = Gather(rs, g.values());
    SourceVector bar = prop->adjoint({res});
    return from == SourceSlot::h ? std::move(bar.h) : std::move(bar.f);
  };
  return LinearOp{dom, ran, label, apply, adj};
}

LinearOp make_S(const OpConfig& cfg) { return make_block(cfg, SourceSlot::h, TraceSlot::p); }

LinearOp make_V(const OpConfig& cfg) { return make_block(cfg, SourceSlot::f, TraceSlot::vz); }

LinearOp make_S_offdiag(const OpConfig& cfg, SourceSlot from, TraceSlot to) {
  if ((from == SourceSlot::h && to == TraceSlot::p) ||
      (from == SourceSlot::f && to == TraceSlot::vz))
    throw ConfigError("make_S_offdiag: requested block is diagonal");
  return make_block(cfg, from, to);
}

RecordedGathers apply_full(const OpConfig& cfg, const SourceVector& sv) {
  auto prop = make_propagator(cfg);
  auto rec = prop->forward(sv);
  return std::move(rec[0]);
}

SourceVector apply_full_adjoint(const OpConfig& cfg, const RecordedGathers& res) {
  auto prop = make_propagator(cfg);
  return prop->adjoint({res});
}

LinearOp make_R(const GatherSpec& spec) {
  auto rev = [](const Gather& g) {
    Gather out = time_reverse_gather(g);
    // Keep the original axis so R composes with fixed-shape operators;
    // applying twice is the identity either way.
    return Gather(g.spec(), out.values());
  };
  return LinearOp{spec, spec, "R", rev, rev};
}

LinearOp PenaltyOp::inv_sqrt(double alpha) const {
  std::vector<double> w(spec.x.size());
  for (std::size_t r = 0; r < w.size(); ++r) {
    double d = spec.x[r] - x_src;
    w[r] = 1.0 / std::sqrt(1.0 + alpha * alpha * d * d);
  }
  return diag_trace_op(spec, std::move(w), "(I+a^2A^TA)^-1/2");
}

PenaltyOp make_A(double x_src, const GatherSpec& spec) {
  std::vector<double> wa(spec.x.size()), wa2(spec.x.size());
  for (std::size_t r = 0; r < wa.size(); ++r) {
    double d = std::abs(spec.x[r] - x_src);
    wa[r] = d;
    wa2[r] = d * d;
  }
  PenaltyOp out;
  out.spec = spec;
  out.x_src = x_src;
  out.A = diag_trace_op(spec, std::move(wa), "A");
  out.AtA = diag_trace_op(spec, std::move(wa2), "A^TA");
  return out;
}

double energy(const AcousticState& state, const Medium& medium) {
  if (state.grid != medium.grid) throw ShapeError("energy: state grid does not match medium");
  const Grid2D& g = medium.grid;
  const double cell = g.dx * g.dz;
  double e = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    double wi = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.nz; ++j) {
      double wj = (j == 0 || j == g.nz - 1) ? 0.5 : 1.0;
      double p = state.px(i, j) + state.pz(i, j);
      e += wi * wj * p * p / medium.kappa(i, j);
    }
  }
  for (int i = 0; i < g.nx - 1; ++i)
    for (int j = 0; j < g.nz; ++j) {
      double wj = (j == 0 || j == g.nz - 1) ? 0.5 : 1.0;
      double rho = 0.5 * (medium.rho(i, j) + medium.rho(i + 1, j));
      e += wj * rho * state.vx(i, j) * state.vx(i, j);
    }
  for (int i = 0; i < g.nx; ++i) {
    double wi = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.nz - 1; ++j) {
      double rho = 0.5 * (medium.rho(i, j) + medium.rho(i, j + 1));
      e += wi * rho * state.vz(i, j) * state.vz(i, j);
    }
  }
  return 0.5 * cell * e;
}

double inband_rel_l2(const Gather& a, const Gather& b, double f1, double f2, double f3,
                     double f4, int edge_traces) {
  check_same_shape(a, b, "inband_rel_l2");
  Gather fa = bandpass_gather(a, f1, f2, f3, f4);
  Gather fb = bandpass_gather(b, f1, f2, f3, f4);
  int lo = edge_traces, hi = a.ntr() - 1 - edge_traces;
  if (lo > hi) throw ConfigError("inband_rel_l2: edge exclusion leaves no traces");
  double nd = 0.0, nb = 0.0;
  for (int r = lo; r <= hi; ++r)
    for (int n = 0; n < a.nt(); ++n) {
      double d = fa.at(r, n) - fb.at(r, n);
      nd += d * d;
      nb += fb.at(r, n) * fb.at(r, n);
    }
  if (nb == 0.0) return nd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(nd / nb);
}

}  // namespace xs
