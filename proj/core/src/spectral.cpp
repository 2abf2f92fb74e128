#include "xs/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <vector>

namespace xs {

namespace {
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

double trapezoid_taper(double f, double f1, double f2, double f3, double f4) {
  double a = std::abs(f);
  if (a <= f1 || a >= f4) return 0.0;
  if (a < f2) return 0.5 * (1.0 - std::cos(M_PI * (a - f1) / (f2 - f1)));
  if (a <= f3) return 1.0;
  return 0.5 * (1.0 + std::cos(M_PI * (a - f3) / (f4 - f3)));
}

Gather bandpass_gather(const Gather& g, double f1, double f2, double f3, double f4) {
  if (!(0.0 <= f1 && f1 < f2 && f2 < f3 && f3 < f4))
    throw ConfigError("bandpass_gather: corner frequencies must be ordered");
  const int nt = g.nt();
  const int nf = nt / 2 + 1;
  const double df = 1.0 / (nt * g.time().dt);

  std::vector<double> in(nt);
  std::vector<std::complex<double>> spec(nf);
  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lk(fftw_mutex());
    fwd = fftw_plan_dft_r2c_1d(nt, in.data(),
                               reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(nt, reinterpret_cast<fftw_complex*>(spec.data()), in.data(),
                               FFTW_ESTIMATE);
  }

  Gather out = g;
  for (int r = 0; r < g.ntr(); ++r) {
    const double* src = g.trace(r);
    for (int n = 0; n < nt; ++n) in[n] = src[n];
    fftw_execute(fwd);
    for (int q = 0; q < nf; ++q) spec[q] *= trapezoid_taper(q * df, f1, f2, f3, f4) / nt;
    fftw_execute(inv);
    double* dst = out.trace(r);
    for (int n = 0; n < nt; ++n) dst[n] = in[n];
  }
  {
    std::lock_guard<std::mutex> lk(fftw_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  return out;
}

namespace {
struct Spectrum2D {
  int ntr, nt;
  std::vector<std::complex<double>> v;  // ntr x nt, trace-major
  std::complex<double>& at(int r, int n) { return v[static_cast<std::size_t>(r) * nt + n]; }
};

Spectrum2D fft2(const Gather& g, int dir) {
  Spectrum2D s{g.ntr(), g.nt(), {}};
  s.v.resize(static_cast<std::size_t>(g.ntr()) * g.nt());
  for (int r = 0; r < g.ntr(); ++r)
    for (int n = 0; n < g.nt(); ++n) s.at(r, n) = g.at(r, n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(fftw_mutex());
    plan = fftw_plan_dft_2d(g.ntr(), g.nt(), reinterpret_cast<fftw_complex*>(s.v.data()),
                            reinterpret_cast<fftw_complex*>(s.v.data()),
                            dir > 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return s;
}

double bin_frequency(int q, int n, double step) {
  int k = (q <= n / 2) ? q : q - n;
  return k / (n * step);
}
}  // namespace

Gather lambda_symbol_apply(const Gather& g, double kappa, double rho, int sign) {
  if (!(kappa > 0.0) || !(rho > 0.0))
    throw ConfigError("lambda_symbol_apply: medium parameters must be positive");
  const double c = std::sqrt(kappa / rho);
  const double scale = 2.0 * (sign >= 0 ? 1.0 : -1.0) / std::sqrt(kappa * rho);
  const double q_taper = 0.9;  // slowness fraction where the cutoff taper starts

  Spectrum2D s = fft2(g, +1);
  for (int r = 0; r < s.ntr; ++r) {
    double xi = bin_frequency(r, s.ntr, g.spec().dxtr());
    for (int n = 0; n < s.nt; ++n) {
      double f = bin_frequency(n, s.nt, g.time().dt);
      double mult = 0.0;
      if (f != 0.0) {
        double q = std::abs(c * xi / f);  // 0 at normal incidence, 1 at cutoff
        if (q < 1.0) {
          double w = 1.0;
          if (q > q_taper) w = 0.5 * (1.0 + std::cos(M_PI * (q - q_taper) / (1.0 - q_taper)));
          mult = scale * std::sqrt(1.0 - q * q) * w;
        }
      }
      s.at(r, n) *= mult;
    }
  }
  {
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lk(fftw_mutex());
      plan = fftw_plan_dft_2d(s.ntr, s.nt, reinterpret_cast<fftw_complex*>(s.v.data()),
                              reinterpret_cast<fftw_complex*>(s.v.data()), FFTW_BACKWARD,
                              FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
      std::lock_guard<std::mutex> lk(fftw_mutex());
      fftw_destroy_plan(plan);
    }
  }
  Gather out(g.spec());
  const double norm = 1.0 / (static_cast<double>(s.ntr) * s.nt);
  for (int r = 0; r < s.ntr; ++r)
    for (int n = 0; n < s.nt; ++n) out.at(r, n) = s.at(r, n).real() * norm;
  return out;
}

namespace {
double tukey(double u, double frac) {
  // u in [0,1]; flat middle, cosine ramps of width frac at both ends
  if (u < frac) return 0.5 * (1.0 - std::cos(M_PI * u / frac));
  if (u > 1.0 - frac) return 0.5 * (1.0 - std::cos(M_PI * (1.0 - u) / frac));
  return 1.0;
}

Gather taper_edges(const Gather& g) {
  Gather win = g;
  for (int r = 0; r < g.ntr(); ++r) {
    double wx = tukey(g.ntr() > 1 ? static_cast<double>(r) / (g.ntr() - 1) : 0.5, 0.15);
    for (int n = 0; n < g.nt(); ++n)
      win.at(r, n) *= wx * tukey(static_cast<double>(n) / (g.nt() - 1), 0.1);
  }
  return win;
}
}  // namespace

double max_slowness_above_db(const Gather& g, double threshold_db) {
  Spectrum2D s = fft2(taper_edges(g), +1);
  double peak = 0.0;
  for (auto& z : s.v) peak = std::max(peak, std::abs(z));
  if (peak == 0.0) return 0.0;
  const double floor = peak * std::pow(10.0, threshold_db / 20.0);
  double worst = 0.0;
  for (int r = 0; r < s.ntr; ++r) {
    double xi = bin_frequency(r, s.ntr, g.spec().dxtr());
    for (int n = 0; n < s.nt; ++n) {
      double f = bin_frequency(n, s.nt, g.time().dt);
      if (std::abs(s.at(r, n)) < floor) continue;
      if (f == 0.0) {
        if (xi != 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      worst = std::max(worst, std::abs(xi / f));
    }
  }
  return worst;
}

double out_of_cone_energy_fraction(const Gather& g, double slowness_limit) {
  Spectrum2D s = fft2(taper_edges(g), +1);
  double out = 0.0, total = 0.0;
  for (int r = 0; r < s.ntr; ++r) {
    double xi = bin_frequency(r, s.ntr, g.spec().dxtr());
    for (int n = 0; n < s.nt; ++n) {
      double f = bin_frequency(n, s.nt, g.time().dt);
      double e = std::norm(s.at(r, n));
      total += e;
      if (f == 0.0) {
        if (xi != 0.0) out += e;
      } else if (std::abs(xi / f) > slowness_limit) {
        out += e;
      }
    }
  }
  return total > 0.0 ? out / total : 0.0;
}

Gather resample_time_refine(const Gather& g, int refine) {
  if (refine < 1) throw ConfigError("resample_time_refine: refine must be >= 1");
  if (refine == 1) return g;
  const int nt = g.nt();
  const int nt2 = nt * refine;
  const int nf = nt / 2 + 1;
  const int nf2 = nt2 / 2 + 1;
  GatherSpec spec = g.spec();
  spec.time = TimeAxis(nt2, g.time().dt / refine, g.time().t0);
  Gather out(spec);

  std::vector<double> in_buf(nt), out_buf(nt2);
  std::vector<std::complex<double>> sp(nf), sp2(nf2);
  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lk(fftw_mutex());
    fwd = fftw_plan_dft_r2c_1d(nt, in_buf.data(),
                               reinterpret_cast<fftw_complex*>(sp.data()), FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(nt2, reinterpret_cast<fftw_complex*>(sp2.data()),
                               out_buf.data(), FFTW_ESTIMATE);
  }
  for (int r = 0; r < g.ntr(); ++r) {
    const double* src = g.trace(r);
    for (int n = 0; n < nt; ++n) in_buf[n] = src[n];
    fftw_execute(fwd);
    std::fill(sp2.begin(), sp2.end(), std::complex<double>(0.0, 0.0));
    for (int q = 0; q < nf; ++q) sp2[q] = sp[q] / static_cast<double>(nt);
    if (nt % 2 == 0) sp2[nf - 1] *= 0.5;  // split the Nyquist bin
    fftw_execute(inv);
    double* dst = out.trace(r);
    for (int n = 0; n < nt2; ++n) dst[n] = out_buf[n];
  }
  {
    std::lock_guard<std::mutex> lk(fftw_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  return out;
}

double central_rms_ratio(const Gather& out, const Gather& in) {
  check_same_shape(out, in, "central_rms_ratio");
  int lo = out.ntr() / 4, hi = out.ntr() - 1 - out.ntr() / 4;
  double so = 0.0, si = 0.0;
  for (int r = lo; r <= hi; ++r)
    for (int n = 0; n < out.nt(); ++n) {
      so += out.at(r, n) * out.at(r, n);
      si += in.at(r, n) * in.at(r, n);
    }
  if (si == 0.0) throw NumericError("central_rms_ratio: zero reference");
  return std::sqrt(so / si);
}

}  // namespace xs
