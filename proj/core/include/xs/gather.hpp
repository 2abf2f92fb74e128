#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xs/common.hpp"

namespace xs {

struct TimeAxis {
  int nt = 0;
  double dt = 0.0;  // s
  double t0 = 0.0;  // s

  TimeAxis() = default;
  TimeAxis(int nt_, double dt_, double t0_) : nt(nt_), dt(dt_), t0(t0_) {
    if (nt < 1) throw ConfigError("TimeAxis: nt must be >= 1");
    if (!(dt > 0.0)) throw ConfigError("TimeAxis: dt must be positive");
  }
  double t(int n) const { return t0 + n * dt; }
  double t_end() const { return t0 + (nt - 1) * dt; }
  bool operator==(const TimeAxis&) const = default;
};

/// Shape of a gather without its values: a horizontal line of traces at
/// fixed depth plus a time axis.
struct GatherSpec {
  double depth_z = 0.0;
  std::vector<double> x;  // strictly increasing trace positions, m
  TimeAxis time;

  GatherSpec() = default;
  GatherSpec(double z, std::vector<double> x_, TimeAxis t)
      : depth_z(z), x(std::move(x_)), time(t) {
    if (x.empty()) throw ConfigError("GatherSpec: no trace positions");
    for (std::size_t i = 1; i < x.size(); ++i)
      if (!(x[i] > x[i - 1]))
        throw ConfigError("GatherSpec: trace positions must be strictly increasing");
  }
  int ntr() const { return static_cast<int>(x.size()); }

  /// Trace spacing used as the quadrature weight in inner products.
  /// Single-trace gathers use 1 m by convention.
  double dxtr() const { return x.size() > 1 ? x[1] - x[0] : 1.0; }

  bool operator==(const GatherSpec&) const = default;
};

/// Samples of one field component on a fixed-depth line: ntr traces of nt
/// samples, stored trace-major in 64-bit reals.
class Gather {
public:
  Gather() = default;
  explicit Gather(GatherSpec spec)
      : spec_(std::move(spec)),
        v_(static_cast<std::size_t>(spec_.ntr()) * spec_.time.nt, 0.0) {}
  Gather(GatherSpec spec, std::vector<double> values)
      : spec_(std::move(spec)), v_(std::move(values)) {
    if (v_.size() != static_cast<std::size_t>(spec_.ntr()) * spec_.time.nt)
      throw ShapeError("Gather: values size does not match ntr x nt");
  }

  const GatherSpec& spec() const { return spec_; }
  int ntr() const { return spec_.ntr(); }
  int nt() const { return spec_.time.nt; }
  const TimeAxis& time() const { return spec_.time; }
  double depth() const { return spec_.depth_z; }
  const std::vector<double>& x_coords() const { return spec_.x; }

  double& at(int itr, int it) { return v_[static_cast<std::size_t>(itr) * nt() + it]; }
  double at(int itr, int it) const { return v_[static_cast<std::size_t>(itr) * nt() + it]; }
  double* trace(int itr) { return v_.data() + static_cast<std::size_t>(itr) * nt(); }
  const double* trace(int itr) const { return v_.data() + static_cast<std::size_t>(itr) * nt(); }

  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  double max_abs() const;
  bool all_finite() const;

private:
  GatherSpec spec_;
  std::vector<double> v_;
};

/// Constitutive-defect h and vertical-load f gathers on the same surface.
struct SourceVector {
  Gather h;
  Gather f;

  SourceVector() = default;
  SourceVector(Gather h_, Gather f_) : h(std::move(h_)), f(std::move(f_)) {
    if (!(h.spec() == f.spec()))
      throw ShapeError("SourceVector: h and f must share depth, traces, and time axis");
  }
  static SourceVector zeros(const GatherSpec& spec) {
    return SourceVector(Gather(spec), Gather(spec));
  }
};

void check_same_shape(const Gather& a, const Gather& b, const char* where);

/// Inner product sum(a_ij b_ij) * dxtr * dt, accumulated with compensated
/// summation so CG coefficient ratios stay clean.
double gather_dot(const Gather& a, const Gather& b);

double gather_norm(const Gather& g);

/// y + alpha * x, inputs untouched.
Gather gather_axpy(double alpha, const Gather& x, const Gather& y);

Gather gather_scale(double alpha, const Gather& g);

/// Multiply every trace by a smooth window: 0 outside [t_lo-ramp, t_hi+ramp],
/// 1 inside [t_lo, t_hi], cosine-tapered on the ramps. ramp=0 gives a boxcar.
Gather mute(const Gather& g, double t_lo, double t_hi, double ramp);

/// Values reversed along time; output axis covers [-t_end, -t0].
Gather time_reverse_gather(const Gather& g);

/// Deterministic pseudorandom gather with entries in [-1, 1).
Gather random_gather(const GatherSpec& spec, std::uint64_t seed);

/// ||a - b|| / ||b||.
double rel_l2(const Gather& a, const Gather& b);

}  // namespace xs
