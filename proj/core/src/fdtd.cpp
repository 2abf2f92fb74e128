#include "xs/fdtd.hpp"

#include <cmath>

namespace xs {

namespace {

// Precomputed update machinery shared by step() and the propagator.
// Update ranges keep a k-cell static frame at the grid edge so the
// discrete divergence is exactly minus the transpose of the discrete
// gradient on the evolving degrees of freedom.
struct Plan {
  Grid2D grid;
  FdScheme scheme;
  int k;
  double dt;  // magnitude
  std::vector<double> a;  // stencil coefficients
  double invdx, invdz;
  // node update range [i_lo, i_hi] x [j_lo, j_hi]
  int i_lo, i_hi, j_lo, j_hi;
  // damping profiles (a: decay, b: input factor), per axis position
  std::vector<double> apx, bpx, avx, bvx;  // x profiles: nodes, x-faces
  std::vector<double> apz, bpz, avz, bvz;  // z profiles: nodes, z-faces
  // medium factors
  Field2D cpk;        // dt * kappa at nodes
  Field2D cvx, cvz;   // dt / rho at faces
  double c_max;

  Plan(const Medium& medium, const FdScheme& sch, double dt_mag)
      : grid(medium.grid), scheme(sch), k(sch.half_order), dt(dt_mag) {
    sch.validate();
    a = staggered_coefficients(k);
    invdx = 1.0 / grid.dx;
    invdz = 1.0 / grid.dz;
    i_lo = k;
    i_hi = grid.nx - 1 - k;
    j_lo = k;
    j_hi = grid.nz - 1 - k;
    if (i_hi - i_lo < 1 || j_hi - j_lo < 1)
      throw ConfigError("propagation grid too small for the requested stencil order");
    c_max = medium.c_max();

    double bound = stable_dt(medium, FdScheme(k, 1.0, sch.pml_width, sch.pml_r0));
    if (dt > bound * (1.0 + 1e-12))
      throw NumericError("time step " + std::to_string(dt) +
                         " s violates the stability bound " + std::to_string(bound) + " s");

    build_damping(grid.nx, grid.dx, i_lo, i_hi, apx, bpx, avx, bvx);
    build_damping(grid.nz, grid.dz, j_lo, j_hi, apz, bpz, avz, bvz);

    cpk = Field2D(grid.nx, grid.nz);
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.nz; ++j) cpk(i, j) = dt * medium.kappa(i, j);
    cvx = Field2D(grid.nx - 1, grid.nz);
    for (int i = 0; i < grid.nx - 1; ++i)
      for (int j = 0; j < grid.nz; ++j)
        cvx(i, j) = dt / (0.5 * (medium.rho(i, j) + medium.rho(i + 1, j)));
    cvz = Field2D(grid.nx, grid.nz - 1);
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.nz - 1; ++j)
        cvz(i, j) = dt / (0.5 * (medium.rho(i, j) + medium.rho(i, j + 1)));
  }

  // Quadratic damping profile over the layer cells just inside the frame.
  void build_damping(int n, double d, int lo, int hi, std::vector<double>& ap,
                     std::vector<double>& bp, std::vector<double>& av,
                     std::vector<double>& bv) const {
    int w = scheme.pml_cells(d);
    double layer = w * d;
    double sig_max =
        (w > 0) ? 3.0 * c_max * std::log(1.0 / scheme.pml_r0) / (2.0 * layer) : 0.0;
    double x_in_lo = (lo + w) * d;   // inner edge of the low-side layer
    double x_in_hi = (hi - w) * d;   // inner edge of the high-side layer
    auto sigma = [&](double x) {
      if (w == 0) return 0.0;
      double depth = 0.0;
      if (x < x_in_lo)
        depth = x_in_lo - x;
      else if (x > x_in_hi)
        depth = x - x_in_hi;
      else
        return 0.0;
      double s = std::min(depth / layer, 1.0);
      return sig_max * s * s;
    };
    ap.resize(n);
    bp.resize(n);
    av.resize(n - 1);
    bv.resize(n - 1);
    for (int i = 0; i < n; ++i) {
      double s = sigma(i * d);
      ap[i] = (1.0 - 0.5 * s * dt) / (1.0 + 0.5 * s * dt);
      bp[i] = 1.0 / (1.0 + 0.5 * s * dt);
    }
    for (int i = 0; i < n - 1; ++i) {
      double s = sigma((i + 0.5) * d);
      av[i] = (1.0 - 0.5 * s * dt) / (1.0 + 0.5 * s * dt);
      bv[i] = 1.0 / (1.0 + 0.5 * s * dt);
    }
  }
};

// ---- forward kernels ------------------------------------------------------

void materialize_ptot(const AcousticState& s, std::vector<double>& ptot) {
  const std::size_t n = s.px.size();
  ptot.resize(n);
  const double* px = s.px.data();
  const double* pz = s.pz.data();
  double* pt = ptot.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(n); ++q) pt[q] = px[q] + pz[q];
}

// v^{n-1/2} -> v^{n+1/2} from grad(p^n). sgn=+1 causal, -1 anticausal.
template <int K>
void update_v_k(const Plan& pl, AcousticState& s, const std::vector<double>& ptot,
                double sgn) {
  const int nz = pl.grid.nz;
  const double* a = pl.a.data();
  const double* pt = ptot.data();

  double* vx = s.vx.data();
  const double* cvx = pl.cvx.data();
#pragma omp parallel for schedule(static)
  for (int i = pl.i_lo - 1; i <= pl.i_hi; ++i) {
    const double ai = pl.avx[i];
    const double bi = sgn * pl.bvx[i] * pl.invdx;
    for (int j = pl.j_lo; j <= pl.j_hi; ++j) {
      double g = 0.0;
      for (int m = 1; m <= K; ++m)
        g += a[m - 1] * (pt[(i + m) * nz + j] - pt[(i + 1 - m) * nz + j]);
      const std::size_t f = static_cast<std::size_t>(i) * nz + j;
      vx[f] = ai * vx[f] - bi * cvx[f] * g;
    }
  }

  double* vz = s.vz.data();
  const double* cvz = pl.cvz.data();
  const int nzf = nz - 1;
#pragma omp parallel for schedule(static)
  for (int i = pl.i_lo; i <= pl.i_hi; ++i) {
    for (int j = pl.j_lo - 1; j <= pl.j_hi; ++j) {
      double g = 0.0;
      for (int m = 1; m <= K; ++m)
        g += a[m - 1] * (pt[i * nz + j + m] - pt[i * nz + j + 1 - m]);
      const std::size_t f = static_cast<std::size_t>(i) * nzf + j;
      vz[f] = pl.avz[j] * vz[f] - sgn * pl.bvz[j] * pl.invdz * cvz[f] * g;
    }
  }
}

void update_v(const Plan& pl, AcousticState& s, const std::vector<double>& ptot, double sgn) {
  switch (pl.k) {
    case 1: return update_v_k<1>(pl, s, ptot, sgn);
    case 2: return update_v_k<2>(pl, s, ptot, sgn);
    case 3: return update_v_k<3>(pl, s, ptot, sgn);
    case 4: return update_v_k<4>(pl, s, ptot, sgn);
    case 5: return update_v_k<5>(pl, s, ptot, sgn);
    case 6: return update_v_k<6>(pl, s, ptot, sgn);
    default: return update_v_k<7>(pl, s, ptot, sgn);
  }
}

// p^n -> p^{n+1} from div(v^{n+1/2}).
template <int K>
void update_p_k(const Plan& pl, AcousticState& s, double sgn) {
  const int nz = pl.grid.nz;
  const int nzf = nz - 1;
  const double* a = pl.a.data();
  const double* vx = s.vx.data();
  const double* vz = s.vz.data();
  const double* cpk = pl.cpk.data();
  double* px = s.px.data();
  double* pz = s.pz.data();
#pragma omp parallel for schedule(static)
  for (int i = pl.i_lo; i <= pl.i_hi; ++i) {
    const double axi = pl.apx[i];
    const double bxi = sgn * pl.bpx[i] * pl.invdx;
    for (int j = pl.j_lo; j <= pl.j_hi; ++j) {
      const std::size_t n = static_cast<std::size_t>(i) * nz + j;
      double gx = 0.0, gz = 0.0;
      for (int m = 1; m <= K; ++m) {
        gx += a[m - 1] * (vx[(i + m - 1) * nz + j] - vx[(i - m) * nz + j]);
        gz += a[m - 1] * (vz[i * nzf + j + m - 1] - vz[i * nzf + j - m]);
      }
      px[n] = axi * px[n] - bxi * cpk[n] * gx;
      pz[n] = pl.apz[j] * pz[n] - sgn * pl.bpz[j] * pl.invdz * cpk[n] * gz;
    }
  }
}

void update_p(const Plan& pl, AcousticState& s, double sgn) {
  switch (pl.k) {
    case 1: return update_p_k<1>(pl, s, sgn);
    case 2: return update_p_k<2>(pl, s, sgn);
    case 3: return update_p_k<3>(pl, s, sgn);
    case 4: return update_p_k<4>(pl, s, sgn);
    case 5: return update_p_k<5>(pl, s, sgn);
    case 6: return update_p_k<6>(pl, s, sgn);
    default: return update_p_k<7>(pl, s, sgn);
  }
}

// ---- transposed kernels ---------------------------------------------------

// Transpose of update_p: scatter into the adjoint velocities, then decay
// the adjoint pressures. Mirrors the forward ranges exactly.
template <int K>
void update_p_transpose_k(const Plan& pl, AcousticState& s, double sgn) {
  const int nz = pl.grid.nz;
  const int nzf = nz - 1;
  constexpr int k = K;
  const double* a = pl.a.data();
  const double* cpk = pl.cpk.data();
  double* px = s.px.data();
  double* pz = s.pz.data();
  double* vx = s.vx.data();
  double* vz = s.vz.data();

  // x part: row-local in j, so parallelize over j.
#pragma omp parallel for schedule(static)
  for (int j = pl.j_lo; j <= pl.j_hi; ++j) {
    for (int i = pl.i_lo; i <= pl.i_hi; ++i) {
      const std::size_t n = static_cast<std::size_t>(i) * nz + j;
      const double t = -sgn * pl.bpx[i] * pl.invdx * cpk[n] * px[n];
      for (int m = 1; m <= k; ++m) {
        vx[(i + m - 1) * nz + j] += a[m - 1] * t;
        vx[(i - m) * nz + j] -= a[m - 1] * t;
      }
    }
  }
  // z part: column-local in i.
#pragma omp parallel for schedule(static)
  for (int i = pl.i_lo; i <= pl.i_hi; ++i) {
    for (int j = pl.j_lo; j <= pl.j_hi; ++j) {
      const std::size_t n = static_cast<std::size_t>(i) * nz + j;
      const double t = -sgn * pl.bpz[j] * pl.invdz * cpk[n] * pz[n];
      for (int m = 1; m <= k; ++m) {
        vz[i * nzf + j + m - 1] += a[m - 1] * t;
        vz[i * nzf + j - m] -= a[m - 1] * t;
      }
    }
  }
#pragma omp parallel for schedule(static)
  for (int i = pl.i_lo; i <= pl.i_hi; ++i)
    for (int j = pl.j_lo; j <= pl.j_hi; ++j) {
      const std::size_t n = static_cast<std::size_t>(i) * nz + j;
      px[n] *= pl.apx[i];
      pz[n] *= pl.apz[j];
    }
}

void update_p_transpose(const Plan& pl, AcousticState& s, double sgn) {
  switch (pl.k) {
    case 1: return update_p_transpose_k<1>(pl, s, sgn);
    case 2: return update_p_transpose_k<2>(pl, s, sgn);
    case 3: return update_p_transpose_k<3>(pl, s, sgn);
    case 4: return update_p_transpose_k<4>(pl, s, sgn);
    case 5: return update_p_transpose_k<5>(pl, s, sgn);
    case 6: return update_p_transpose_k<6>(pl, s, sgn);
    default: return update_p_transpose_k<7>(pl, s, sgn);
  }
}

// Transpose of update_v: scatter into a shared node scratch added to both
// adjoint pressure components, then decay the adjoint velocities.
template <int K>
void update_v_transpose_k(const Plan& pl, AcousticState& s, std::vector<double>& scratch,
                          double sgn) {
  const int nz = pl.grid.nz;
  const int nzf = nz - 1;
  constexpr int k = K;
  const double* a = pl.a.data();
  scratch.assign(pl.grid.nodes(), 0.0);
  double* sc = scratch.data();
  double* vx = s.vx.data();
  double* vz = s.vz.data();
  const double* cvx = pl.cvx.data();
  const double* cvz = pl.cvz.data();

#pragma omp parallel for schedule(static)
  for (int j = pl.j_lo; j <= pl.j_hi; ++j) {
    for (int i = pl.i_lo - 1; i <= pl.i_hi; ++i) {
      const std::size_t f = static_cast<std::size_t>(i) * nz + j;
      const double t = -sgn * pl.bvx[i] * pl.invdx * cvx[f] * vx[f];
      for (int m = 1; m <= k; ++m) {
        sc[(i + m) * nz + j] += a[m - 1] * t;
        sc[(i + 1 - m) * nz + j] -= a[m - 1] * t;
      }
    }
  }
#pragma omp parallel for schedule(static)
  for (int i = pl.i_lo; i <= pl.i_hi; ++i) {
    for (int j = pl.j_lo - 1; j <= pl.j_hi; ++j) {
      const std::size_t f = static_cast<std::size_t>(i) * nzf + j;
      const double t = -sgn * pl.bvz[j] * pl.invdz * cvz[f] * vz[f];
      for (int m = 1; m <= k; ++m) {
        sc[i * nz + j + m] += a[m - 1] * t;
        sc[i * nz + j + 1 - m] -= a[m - 1] * t;
      }
    }
  }

  double* px = s.px.data();
  double* pz = s.pz.data();
  const std::size_t nn = pl.grid.nodes();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(nn); ++q) {
    px[q] += sc[q];
    pz[q] += sc[q];
  }
#pragma omp parallel for schedule(static)
  for (int i = pl.i_lo - 1; i <= pl.i_hi; ++i)
    for (int j = pl.j_lo; j <= pl.j_hi; ++j) {
      const std::size_t f = static_cast<std::size_t>(i) * nz + j;
      vx[f] *= pl.avx[i];
    }
#pragma omp parallel for schedule(static)
  for (int i = pl.i_lo; i <= pl.i_hi; ++i)
    for (int j = pl.j_lo - 1; j <= pl.j_hi; ++j) {
      const std::size_t f = static_cast<std::size_t>(i) * nzf + j;
      vz[f] *= pl.avz[j];
    }
}

void update_v_transpose(const Plan& pl, AcousticState& s, std::vector<double>& scratch,
                        double sgn) {
  switch (pl.k) {
    case 1: return update_v_transpose_k<1>(pl, s, scratch, sgn);
    case 2: return update_v_transpose_k<2>(pl, s, scratch, sgn);
    case 3: return update_v_transpose_k<3>(pl, s, scratch, sgn);
    case 4: return update_v_transpose_k<4>(pl, s, scratch, sgn);
    case 5: return update_v_transpose_k<5>(pl, s, scratch, sgn);
    case 6: return update_v_transpose_k<6>(pl, s, scratch, sgn);
    default: return update_v_transpose_k<7>(pl, s, scratch, sgn);
  }
}

// ---- interpolation hooks --------------------------------------------------

struct XHook {
  int i0;
  double w0, w1;
};
struct ZHook {
  int j0;
  double w0, w1;
};

XHook make_x_hook(const Grid2D& g, double x) {
  double s = (x - g.x0) / g.dx;
  int i0 = static_cast<int>(std::floor(s));
  if (i0 < 0 || i0 + 1 > g.nx - 1) throw ConfigError("trace x position outside grid");
  double w = s - i0;
  return {i0, 1.0 - w, w};
}

ZHook make_z_hook_nodes(const Grid2D& g, double z) {
  double s = (z - g.z0) / g.dz;
  int j0 = static_cast<int>(std::floor(s));
  if (j0 < 0 || j0 + 1 > g.nz - 1) throw ConfigError("depth outside grid");
  double w = s - j0;
  return {j0, 1.0 - w, w};
}

ZHook make_z_hook_faces(const Grid2D& g, double z) {
  double s = (z - g.z0) / g.dz - 0.5;
  int j0 = static_cast<int>(std::floor(s));
  if (j0 < 0 || j0 + 1 > g.nz - 2) throw ConfigError("depth outside staggered grid");
  double w = s - j0;
  return {j0, 1.0 - w, w};
}

double sample_p_at(const AcousticState& s, const XHook& hx, const ZHook& hz) {
  const int nz = s.grid.nz;
  const double* px = s.px.data();
  const double* pz = s.pz.data();
  auto node = [&](int i, int j) {
    const std::size_t n = static_cast<std::size_t>(i) * nz + j;
    return px[n] + pz[n];
  };
  return hx.w0 * (hz.w0 * node(hx.i0, hz.j0) + hz.w1 * node(hx.i0, hz.j0 + 1)) +
         hx.w1 * (hz.w0 * node(hx.i0 + 1, hz.j0) + hz.w1 * node(hx.i0 + 1, hz.j0 + 1));
}

double sample_vz_at(const AcousticState& s, const XHook& hx, const ZHook& hz) {
  const int nzf = s.grid.nz - 1;
  const double* vz = s.vz.data();
  auto face = [&](int i, int j) { return vz[static_cast<std::size_t>(i) * nzf + j]; };
  return hx.w0 * (hz.w0 * face(hx.i0, hz.j0) + hz.w1 * face(hx.i0, hz.j0 + 1)) +
         hx.w1 * (hz.w0 * face(hx.i0 + 1, hz.j0) + hz.w1 * face(hx.i0 + 1, hz.j0 + 1));
}

}  // namespace

// ---- public margin / interior checks ---------------------------------------

int interior_margin_cells(const FdScheme& scheme, double d) {
  return scheme.half_order + scheme.pml_cells(d) + 1;
}

void check_interior(const Grid2D& grid, const FdScheme& scheme, double x, double z,
                    const char* what) {
  int mx = interior_margin_cells(scheme, grid.dx);
  int mz = interior_margin_cells(scheme, grid.dz);
  double x_lo = grid.x(mx), x_hi = grid.x(grid.nx - 1 - mx);
  double z_lo = grid.z(mz), z_hi = grid.z(grid.nz - 1 - mz);
  if (x < x_lo || x > x_hi || z < z_lo || z > z_hi)
    throw ConfigError(std::string(what) + " at (" + std::to_string(x) + ", " +
                      std::to_string(z) + ") m lies outside the usable interior [" +
                      std::to_string(x_lo) + ", " + std::to_string(x_hi) + "] x [" +
                      std::to_string(z_lo) + ", " + std::to_string(z_hi) + "] m");
}

// ---- step / sample / spread / inject ----------------------------------------

void step_inplace(AcousticState& state, const Medium& medium, const FdScheme& scheme,
                  double dt_signed) {
  if (state.grid != medium.grid) throw ShapeError("step: state grid does not match medium");
  Plan pl(medium, scheme, std::abs(dt_signed));
  double sgn = dt_signed >= 0.0 ? 1.0 : -1.0;
  const double before = std::max(1.0, state.max_abs());
  std::vector<double> ptot;
  materialize_ptot(state, ptot);
  update_v(pl, state, ptot, sgn);
  update_p(pl, state, sgn);
  const double after = state.max_abs();
  if (!std::isfinite(after) || after > 1e10 * before)
    throw NumericError("step: instability detected");
}

AcousticState step(const AcousticState& state, const Medium& medium, const FdScheme& scheme,
                   double dt_signed) {
  AcousticState out = state;
  step_inplace(out, medium, scheme, dt_signed);
  return out;
}

std::vector<double> sample(const AcousticState& state, Component comp, double depth_z,
                           const std::vector<double>& x_coords, const FdScheme& scheme) {
  std::vector<double> out(x_coords.size());
  for (std::size_t r = 0; r < x_coords.size(); ++r) {
    check_interior(state.grid, scheme, x_coords[r], depth_z, "sample point");
    XHook hx = make_x_hook(state.grid, x_coords[r]);
    if (comp == Component::p) {
      ZHook hz = make_z_hook_nodes(state.grid, depth_z);
      out[r] = sample_p_at(state, hx, hz);
    } else {
      ZHook hz = make_z_hook_faces(state.grid, depth_z);
      out[r] = sample_vz_at(state, hx, hz);
    }
  }
  return out;
}

void spread(AcousticState& state, Component comp, double depth_z,
            const std::vector<double>& x_coords, const std::vector<double>& vals,
            const FdScheme& scheme) {
  if (vals.size() != x_coords.size())
    throw ShapeError("spread: values and trace positions differ in length");
  const double w_delta = 1.0 / state.grid.dz;
  for (std::size_t r = 0; r < x_coords.size(); ++r) {
    check_interior(state.grid, scheme, x_coords[r], depth_z, "source point");
    XHook hx = make_x_hook(state.grid, x_coords[r]);
    double v = vals[r] * w_delta;
    if (comp == Component::p) {
      ZHook hz = make_z_hook_nodes(state.grid, depth_z);
      state.pz(hx.i0, hz.j0) += hx.w0 * hz.w0 * v;
      state.pz(hx.i0, hz.j0 + 1) += hx.w0 * hz.w1 * v;
      state.pz(hx.i0 + 1, hz.j0) += hx.w1 * hz.w0 * v;
      state.pz(hx.i0 + 1, hz.j0 + 1) += hx.w1 * hz.w1 * v;
    } else {
      ZHook hz = make_z_hook_faces(state.grid, depth_z);
      state.vz(hx.i0, hz.j0) += hx.w0 * hz.w0 * v;
      state.vz(hx.i0, hz.j0 + 1) += hx.w0 * hz.w1 * v;
      state.vz(hx.i0 + 1, hz.j0) += hx.w1 * hz.w0 * v;
      state.vz(hx.i0 + 1, hz.j0 + 1) += hx.w1 * hz.w1 * v;
    }
  }
}

void inject(AcousticState& state, const SourceVector& sv, int time_index, double dt,
            const Medium& medium, const FdScheme& scheme) {
  if (time_index < 0 || time_index >= sv.h.nt())
    throw ConfigError("inject: time index out of range");
  const Grid2D& g = state.grid;
  const double z = sv.h.depth();
  const std::vector<double>& xs = sv.h.x_coords();
  for (int r = 0; r < sv.h.ntr(); ++r) {
    check_interior(g, scheme, xs[r], z, "source point");
    XHook hx = make_x_hook(g, xs[r]);
    {
      ZHook hz = make_z_hook_nodes(g, z);
      double v = sv.h.at(r, time_index) * dt / g.dz;
      auto add = [&](int i, int j, double w) {
        state.pz(i, j) += medium.kappa(i, j) * w * v;
      };
      add(hx.i0, hz.j0, hx.w0 * hz.w0);
      add(hx.i0, hz.j0 + 1, hx.w0 * hz.w1);
      add(hx.i0 + 1, hz.j0, hx.w1 * hz.w0);
      add(hx.i0 + 1, hz.j0 + 1, hx.w1 * hz.w1);
    }
    {
      ZHook hz = make_z_hook_faces(g, z);
      double v = sv.f.at(r, time_index) * dt / g.dz;
      auto add = [&](int i, int jf, double w) {
        double rho_face = 0.5 * (medium.rho(i, jf) + medium.rho(i, jf + 1));
        state.vz(i, jf) += w * v / rho_face;
      };
      add(hx.i0, hz.j0, hx.w0 * hz.w0);
      add(hx.i0, hz.j0 + 1, hx.w0 * hz.w1);
      add(hx.i0 + 1, hz.j0, hx.w1 * hz.w0);
      add(hx.i0 + 1, hz.j0 + 1, hx.w1 * hz.w1);
    }
  }
}

// ---- SurfacePropagator ------------------------------------------------------

struct SurfacePropagator::Impl {
  PropagationConfig cfg;
  Plan plan;
  std::vector<XHook> src_x, rec_x;
  ZHook src_h, src_f;
  std::vector<ZHook> rec_p, rec_vz;
  double adjoint_weight;  // record dxtr / source dxtr

  explicit Impl(PropagationConfig c) : cfg(std::move(c)), plan(cfg.medium, cfg.scheme, cfg.time.dt) {
    const Grid2D& g = cfg.medium.grid;
    for (double x : cfg.source_spec.x) {
      check_interior(g, cfg.scheme, x, cfg.source_spec.depth_z, "source trace");
      src_x.push_back(make_x_hook(g, x));
    }
    if (cfg.record_x.empty()) throw ConfigError("propagate: no record positions");
    for (double x : cfg.record_x) {
      for (double zd : cfg.record_depths) check_interior(g, cfg.scheme, x, zd, "record trace");
      rec_x.push_back(make_x_hook(g, x));
    }
    if (cfg.record_depths.empty()) throw ConfigError("propagate: no record depths");
    src_h = make_z_hook_nodes(g, cfg.source_spec.depth_z);
    src_f = make_z_hook_faces(g, cfg.source_spec.depth_z);
    for (double zd : cfg.record_depths) {
      rec_p.push_back(make_z_hook_nodes(g, zd));
      rec_vz.push_back(make_z_hook_faces(g, zd));
    }
    double rec_dxtr = cfg.record_x.size() > 1 ? cfg.record_x[1] - cfg.record_x[0] : 1.0;
    adjoint_weight = rec_dxtr / cfg.source_spec.dxtr();
  }

  GatherSpec rec_spec(int d) const {
    return GatherSpec(cfg.record_depths[d], cfg.record_x, cfg.time);
  }

  void add_h(AcousticState& s, const Gather& h, int n, int n2, double w) const {
    // h applied at the p-update midpoint: 0.5*(h[n] + h[n+1]).
    const Grid2D& g = s.grid;
    for (int r = 0; r < h.ntr(); ++r) {
      double hv = 0.5 * (h.at(r, n) + (n2 < h.nt() ? h.at(r, n2) : 0.0));
      double v = w * hv * plan.dt / g.dz;
      auto add = [&](int i, int j, double ww) { s.pz(i, j) += plan.cpk(i, j) / plan.dt * ww * v; };
      add(src_x[r].i0, src_h.j0, src_x[r].w0 * src_h.w0);
      add(src_x[r].i0, src_h.j0 + 1, src_x[r].w0 * src_h.w1);
      add(src_x[r].i0 + 1, src_h.j0, src_x[r].w1 * src_h.w0);
      add(src_x[r].i0 + 1, src_h.j0 + 1, src_x[r].w1 * src_h.w1);
    }
  }

  void add_h_transpose(const AcousticState& s, Gather& hbar, int n, int n2) const {
    const Grid2D& g = s.grid;
    for (int r = 0; r < hbar.ntr(); ++r) {
      double acc = 0.0;
      auto rd = [&](int i, int j, double ww) { acc += plan.cpk(i, j) / plan.dt * ww * s.pz(i, j); };
      rd(src_x[r].i0, src_h.j0, src_x[r].w0 * src_h.w0);
      rd(src_x[r].i0, src_h.j0 + 1, src_x[r].w0 * src_h.w1);
      rd(src_x[r].i0 + 1, src_h.j0, src_x[r].w1 * src_h.w0);
      rd(src_x[r].i0 + 1, src_h.j0 + 1, src_x[r].w1 * src_h.w1);
      acc *= plan.dt / g.dz;
      hbar.at(r, n) += 0.5 * acc;
      if (n2 < hbar.nt()) hbar.at(r, n2) += 0.5 * acc;
    }
  }

  void add_f(AcousticState& s, const Gather& f, int n) const {
    const Grid2D& g = s.grid;
    const int nzf = g.nz - 1;
    for (int r = 0; r < f.ntr(); ++r) {
      double v = f.at(r, n) * plan.dt / g.dz;
      auto add = [&](int i, int jf, double ww) {
        s.vz.data()[static_cast<std::size_t>(i) * nzf + jf] +=
            plan.cvz(i, jf) / plan.dt * ww * v;
      };
      add(src_x[r].i0, src_f.j0, src_x[r].w0 * src_f.w0);
      add(src_x[r].i0, src_f.j0 + 1, src_x[r].w0 * src_f.w1);
      add(src_x[r].i0 + 1, src_f.j0, src_x[r].w1 * src_f.w0);
      add(src_x[r].i0 + 1, src_f.j0 + 1, src_x[r].w1 * src_f.w1);
    }
  }

  void add_f_transpose(const AcousticState& s, Gather& fbar, int n) const {
    const Grid2D& g = s.grid;
    const int nzf = g.nz - 1;
    for (int r = 0; r < fbar.ntr(); ++r) {
      double acc = 0.0;
      auto rd = [&](int i, int jf, double ww) {
        acc += plan.cvz(i, jf) / plan.dt * ww *
               s.vz.data()[static_cast<std::size_t>(i) * nzf + jf];
      };
      rd(src_x[r].i0, src_f.j0, src_x[r].w0 * src_f.w0);
      rd(src_x[r].i0, src_f.j0 + 1, src_x[r].w0 * src_f.w1);
      rd(src_x[r].i0 + 1, src_f.j0, src_x[r].w1 * src_f.w0);
      rd(src_x[r].i0 + 1, src_f.j0 + 1, src_x[r].w1 * src_f.w1);
      fbar.at(r, n) += acc * plan.dt / g.dz;
    }
  }

  // Causal kernel: the whole forward map as one linear pass.
  std::vector<RecordedGathers> run_causal(const SourceVector& src,
                                          const StepObserver& obs) const {
    AcousticState st(cfg.medium.grid);
    std::vector<RecordedGathers> out;
    for (std::size_t d = 0; d < cfg.record_depths.size(); ++d)
      out.push_back({Gather(rec_spec(d)), Gather(rec_spec(d))});

    const int nt = cfg.time.nt;
    const double guard = 1e10 * std::max({1.0, src.h.max_abs(), src.f.max_abs()});
    std::vector<double> ptot;
    for (int n = 0; n < nt; ++n) {
      for (std::size_t d = 0; d < rec_p.size(); ++d)
        for (std::size_t r = 0; r < rec_x.size(); ++r)
          out[d].p.at(r, n) += sample_p_at(st, rec_x[r], rec_p[d]);
      materialize_ptot(st, ptot);
      update_v(plan, st, ptot, +1.0);
      add_f(st, src.f, n);
      for (std::size_t d = 0; d < rec_vz.size(); ++d)
        for (std::size_t r = 0; r < rec_x.size(); ++r) {
          double sv = sample_vz_at(st, rec_x[r], rec_vz[d]);
          out[d].vz.at(r, n) += 0.5 * sv;
          if (n + 1 < nt) out[d].vz.at(r, n + 1) += 0.5 * sv;
        }
      update_p(plan, st, +1.0);
      add_h(st, src.h, n, n + 1, 1.0);
      if (obs) obs(n, st);
      if ((n & 63) == 63) {
        double m = st.px.max_abs();
        if (!std::isfinite(m) || m > guard)
          throw NumericError("propagate: instability detected at step " + std::to_string(n));
      }
    }
    return out;
  }

  // Exact algebraic transpose of run_causal.
  SourceVector run_causal_transpose(const std::vector<RecordedGathers>& res) const {
    AcousticState st(cfg.medium.grid);
    SourceVector out = SourceVector::zeros(cfg.source_spec);
    const int nt = cfg.time.nt;
    std::vector<double> scratch;
    for (int n = nt - 1; n >= 0; --n) {
      add_h_transpose(st, out.h, n, n + 1);
      update_p_transpose(plan, st, +1.0);
      for (std::size_t d = 0; d < rec_vz.size(); ++d)
        for (std::size_t r = 0; r < rec_x.size(); ++r) {
          double gv = 0.5 * res[d].vz.at(r, n) +
                      (n + 1 < nt ? 0.5 * res[d].vz.at(r, n + 1) : 0.0);
          const int nzf = cfg.medium.grid.nz - 1;
          auto add = [&](int i, int jf, double ww) {
            st.vz.data()[static_cast<std::size_t>(i) * nzf + jf] += ww * gv;
          };
          add(rec_x[r].i0, rec_vz[d].j0, rec_x[r].w0 * rec_vz[d].w0);
          add(rec_x[r].i0, rec_vz[d].j0 + 1, rec_x[r].w0 * rec_vz[d].w1);
          add(rec_x[r].i0 + 1, rec_vz[d].j0, rec_x[r].w1 * rec_vz[d].w0);
          add(rec_x[r].i0 + 1, rec_vz[d].j0 + 1, rec_x[r].w1 * rec_vz[d].w1);
        }
      add_f_transpose(st, out.f, n);
      update_v_transpose(plan, st, scratch, +1.0);
      for (std::size_t d = 0; d < rec_p.size(); ++d)
        for (std::size_t r = 0; r < rec_x.size(); ++r) {
          double gv = res[d].p.at(r, n);
          auto add = [&](int i, int j, double ww) {
            st.px(i, j) += ww * gv;
            st.pz(i, j) += ww * gv;
          };
          add(rec_x[r].i0, rec_p[d].j0, rec_x[r].w0 * rec_p[d].w0);
          add(rec_x[r].i0, rec_p[d].j0 + 1, rec_x[r].w0 * rec_p[d].w1);
          add(rec_x[r].i0 + 1, rec_p[d].j0, rec_x[r].w1 * rec_p[d].w0);
          add(rec_x[r].i0 + 1, rec_p[d].j0 + 1, rec_x[r].w1 * rec_p[d].w1);
        }
    }
    return out;
  }
};

SurfacePropagator::SurfacePropagator(PropagationConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(cfg))) {}
SurfacePropagator::~SurfacePropagator() = default;

const PropagationConfig& SurfacePropagator::config() const { return impl_->cfg; }

GatherSpec SurfacePropagator::record_spec(int which_depth) const {
  return impl_->rec_spec(which_depth);
}

namespace {
Gather reverse_values(const Gather& g) {
  Gather out(g.spec());
  for (int r = 0; r < g.ntr(); ++r)
    for (int n = 0; n < g.nt(); ++n) out.at(r, n) = g.at(r, g.nt() - 1 - n);
  return out;
}
Gather reverse_scaled(const Gather& g, double s) {
  Gather out(g.spec());
  for (int r = 0; r < g.ntr(); ++r)
    for (int n = 0; n < g.nt(); ++n) out.at(r, n) = s * g.at(r, g.nt() - 1 - n);
  return out;
}
}  // namespace

std::vector<RecordedGathers> SurfacePropagator::forward(const SourceVector& src,
                                                        const StepObserver& obs) const {
  if (!(src.h.spec() == impl_->cfg.source_spec))
    throw ShapeError("propagate: source gather shape does not match configuration");
  if (impl_->cfg.direction == Direction::causal) return impl_->run_causal(src, obs);
  // Anti-causal marching is the causal kernel conjugated by time reversal
  // with the velocity sign flipped.
  SourceVector flipped(reverse_scaled(src.h, -1.0), reverse_values(src.f));
  auto raw = impl_->run_causal(flipped, obs);
  std::vector<RecordedGathers> out;
  out.reserve(raw.size());
  for (auto& rg : raw)
    out.push_back({reverse_values(rg.p), reverse_scaled(rg.vz, -1.0)});
  return out;
}

SourceVector SurfacePropagator::adjoint(const std::vector<RecordedGathers>& residuals) const {
  if (residuals.size() != impl_->cfg.record_depths.size())
    throw ShapeError("adjoint_propagate: residual count does not match record depths");
  for (std::size_t d = 0; d < residuals.size(); ++d) {
    if (!(residuals[d].p.spec() == impl_->rec_spec(static_cast<int>(d))))
      throw ShapeError("adjoint_propagate: residual gather shape mismatch");
    check_same_shape(residuals[d].p, residuals[d].vz, "adjoint_propagate");
  }
  SourceVector bar = SourceVector::zeros(impl_->cfg.source_spec);
  if (impl_->cfg.direction == Direction::causal) {
    bar = impl_->run_causal_transpose(residuals);
  } else {
    std::vector<RecordedGathers> flipped;
    flipped.reserve(residuals.size());
    for (auto& rg : residuals)
      flipped.push_back({reverse_values(rg.p), reverse_scaled(rg.vz, -1.0)});
    SourceVector raw = impl_->run_causal_transpose(flipped);
    bar = SourceVector(reverse_scaled(raw.h, -1.0), reverse_values(raw.f));
  }
  if (impl_->adjoint_weight != 1.0) {
    bar.h = gather_scale(impl_->adjoint_weight, bar.h);
    bar.f = gather_scale(impl_->adjoint_weight, bar.f);
  }
  return bar;
}

std::vector<RecordedGathers> propagate(const SourceVector& source,
                                       const std::vector<double>& record_depths,
                                       const std::vector<double>& record_x,
                                       const Medium& medium, const FdScheme& scheme,
                                       const TimeAxis& time, Direction direction,
                                       const StepObserver& obs) {
  PropagationConfig cfg{medium, scheme, time, source.h.spec(), record_depths, record_x,
                        direction};
  SurfacePropagator prop(std::move(cfg));
  return prop.forward(source, obs);
}

SourceVector adjoint_propagate(const PropagationConfig& cfg,
                               const std::vector<RecordedGathers>& residuals) {
  SurfacePropagator prop(cfg);
  return prop.adjoint(residuals);
}

}  // namespace xs
