#include "xs/gather.hpp"

#include <cmath>
#include <limits>

namespace xs {

double Gather::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

bool Gather::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

void check_same_shape(const Gather& a, const Gather& b, const char* where) {
  if (a.ntr() != b.ntr())
    throw ShapeError(std::string(where) + ": trace count mismatch: " +
                     std::to_string(a.ntr()) + " vs " + std::to_string(b.ntr()));
  if (a.nt() != b.nt())
    throw ShapeError(std::string(where) + ": sample count mismatch: " +
                     std::to_string(a.nt()) + " vs " + std::to_string(b.nt()));
  if (a.time().dt != b.time().dt)
    throw ShapeError(std::string(where) + ": time step mismatch");
}

double gather_dot(const Gather& a, const Gather& b) {
  check_same_shape(a, b, "gather_dot");
  // Neumaier compensated sum.
  double s = 0.0, c = 0.0;
  const std::vector<double>& av = a.values();
  const std::vector<double>& bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    double term = av[i] * bv[i];
    double t = s + term;
    if (std::abs(s) >= std::abs(term))
      c += (s - t) + term;
    else
      c += (term - t) + s;
    s = t;
  }
  return (s + c) * a.spec().dxtr() * a.time().dt;
}

double gather_norm(const Gather& g) { return std::sqrt(gather_dot(g, g)); }

Gather gather_axpy(double alpha, const Gather& x, const Gather& y) {
  check_same_shape(x, y, "gather_axpy");
  Gather out = y;
  std::vector<double>& ov = out.values();
  const std::vector<double>& xv = x.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += alpha * xv[i];
  return out;
}

Gather gather_scale(double alpha, const Gather& g) {
  Gather out = g;
  for (double& v : out.values()) v *= alpha;
  return out;
}

namespace {
double window_value(double t, double t_lo, double t_hi, double ramp) {
  if (t >= t_lo && t <= t_hi) return 1.0;
  if (ramp <= 0.0) return 0.0;
  if (t > t_lo - ramp && t < t_lo) {
    double s = (t - (t_lo - ramp)) / ramp;
    return 0.5 * (1.0 - std::cos(M_PI * s));
  }
  if (t > t_hi && t < t_hi + ramp) {
    double s = ((t_hi + ramp) - t) / ramp;
    return 0.5 * (1.0 - std::cos(M_PI * s));
  }
  return 0.0;
}
}  // namespace

Gather mute(const Gather& g, double t_lo, double t_hi, double ramp) {
  if (!(t_lo < t_hi)) throw ConfigError("mute: t_lo must be < t_hi");
  if (ramp < 0.0) throw ConfigError("mute: ramp must be >= 0");
  Gather out = g;
  std::vector<double> w(g.nt());
  for (int n = 0; n < g.nt(); ++n) w[n] = window_value(g.time().t(n), t_lo, t_hi, ramp);
  for (int itr = 0; itr < g.ntr(); ++itr) {
    double* tr = out.trace(itr);
    for (int n = 0; n < g.nt(); ++n) tr[n] *= w[n];
  }
  return out;
}

Gather time_reverse_gather(const Gather& g) {
  GatherSpec spec = g.spec();
  spec.time = TimeAxis(g.nt(), g.time().dt, -g.time().t_end());
  Gather out(spec);
  for (int itr = 0; itr < g.ntr(); ++itr) {
    const double* src = g.trace(itr);
    double* dst = out.trace(itr);
    for (int n = 0; n < g.nt(); ++n) dst[n] = src[g.nt() - 1 - n];
  }
  return out;
}

namespace {
// splitmix64: portable, reproducible across platforms and compilers.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

Gather random_gather(const GatherSpec& spec, std::uint64_t seed) {
  Gather out(spec);
  std::uint64_t state = seed ^ 0xa0761d6478bd642fULL;
  for (double& v : out.values()) {
    double u = (splitmix64(state) >> 11) * 0x1.0p-53;  // [0,1)
    v = 2.0 * u - 1.0;
  }
  return out;
}

double rel_l2(const Gather& a, const Gather& b) {
  double nb = gather_norm(b);
  Gather d = gather_axpy(-1.0, b, a);
  double nd = gather_norm(d);
  if (nb == 0.0) return nd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return nd / nb;
}

}  // namespace xs
