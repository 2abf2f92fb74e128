#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "xs/dtn.hpp"
#include "xs/gather_io.hpp"
#include "xs/spectral.hpp"

namespace xs::cli {

namespace {

namespace fs = std::filesystem;

double now_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string prepare_out(const RunConfig& cfg) {
  std::string out = cfg.get("out", "out");
  fs::create_directories(out);
#ifdef _OPENMP
  if (cfg.has("threads")) omp_set_num_threads(cfg.get_int("threads", 1));
#endif
  return out;
}

void export_gather(const std::string& dir, const std::string& stem, const Gather& g,
                   double clip = 0.0) {
  write_xsg(dir + "/" + stem + ".xsg", g);
  write_pgm_gather(dir + "/" + stem + ".pgm", g, clip);
}

SlabConfig slab_at(const Scenario& scn, const Medium& medium, double z_anchor) {
  return SlabConfig{z_anchor, scn.delta_z, scn.x_coords, scn.time, medium, scn.scheme, true};
}

Gather load_or_make_data(const RunConfig& cfg, const Scenario& scn) {
  if (cfg.has("data")) return read_xsg(cfg.get("data", ""));
  return make_downgoing_sources(scn).d;
}

}  // namespace

InversionOps build_inversion_ops(const Scenario& scn, const Medium& medium) {
  OpConfig oc{medium, scn.scheme, scn.z_src, scn.z_rec, scn.x_coords, scn.time,
              Direction::causal};
  InversionOps ops{make_S(oc),
                   make_V(oc),
                   wd(slab_at(scn, medium, scn.z_rec)),
                   wm(oc),
                   wm_inv(slab_at(scn, medium, scn.z_src)),
                   make_A(scn.x_penalty_center, oc.src_spec()),
                   0.0};
  // impedance at the physical source position sets the dimensionless scale
  int ic = static_cast<int>(std::lround((scn.x_penalty_center - medium.grid.x0) /
                                        medium.grid.dx));
  int jc = static_cast<int>(std::lround((scn.z_src - medium.grid.z0) / medium.grid.dz));
  ops.data_scale = std::sqrt(medium.kappa(ic, jc) * medium.rho(ic, jc));
  return ops;
}

InversionProblem build_problem(const InversionOps& ops, const Gather& d, double alpha) {
  InversionProblem prob;
  prob.S = ops.S;
  prob.penalty = ops.penalty;
  prob.W_d = ops.W_d;
  prob.W_m = ops.W_m;
  prob.Wm_inv = ops.Wm_inv;
  prob.d = d;
  prob.alpha = alpha;
  prob.data_scale = ops.data_scale;
  return prob;
}

int cmd_simulate(const RunConfig& cfg) {
  cfg.validate("simulate");
  auto start = std::chrono::steady_clock::now();
  std::string out = prepare_out(cfg);
  Scenario scn = cfg.scenario();
  DowngoingFields df = make_downgoing_sources(scn);
  export_gather(out, "d", df.d);
  export_gather(out, "hs", df.h_s);
  export_gather(out, "fs", df.f_s);
  export_gather(out, "ps_p", df.ps_p);
  export_gather(out, "ps_vz", df.ps_vz);
  cfg.write_manifest(out + "/manifest.txt", "simulate", now_seconds(start));
  std::printf("simulate: wrote d, hs, fs, ps_p, ps_vz to %s (%.1f s)\n", out.c_str(),
              now_seconds(start));
  return kExitOk;
}

int cmd_dottest(const RunConfig& cfg) {
  cfg.validate("dottest");
  auto start = std::chrono::steady_clock::now();
  std::string out = prepare_out(cfg);
  Scenario scn = cfg.scenario();

  // adjoint exactness is geometry-independent; a reduced gather keeps the
  // full sweep fast
  int ntr = cfg.get_int("dottest.ntr", 51);
  int nt = cfg.get_int("dottest.nt", 257);
  int trials = cfg.get_int("dottest.trials", 3);
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_num("seed", 1234));
  double alpha = cfg.get_num("alpha", 1e-3);

  Scenario small = scn;
  small.time = TimeAxis(nt, scn.time.dt, scn.time.t0);
  small.x_coords.assign(scn.x_coords.begin(), scn.x_coords.begin() + ntr);

  OpConfig oc{small.medium, small.scheme, small.z_src, small.z_rec, small.x_coords,
              small.time, Direction::causal};
  InversionOps ops = build_inversion_ops(small, small.medium);
  InversionProblem prob = build_problem(ops, Gather(ops.S.range), alpha);
  NormalSystem ns = normal_op(prob);
  LinearOp M_inv = preconditioner(prob);
  LinearOp lam = lambda_tilde(slab_at(small, small.medium, small.z_src));

  struct Entry {
    const char* name;
    const LinearOp* op;
  };
  LinearOp s_hvz = make_S_offdiag(oc, SourceSlot::h, TraceSlot::vz);
  LinearOp s_fp = make_S_offdiag(oc, SourceSlot::f, TraceSlot::p);
  std::vector<Entry> entries{
      {"S", &ops.S},          {"V", &ops.V},        {"S[h->vz]", &s_hvz},
      {"S[f->p]", &s_fp},     {"Lambda~", &lam},    {"Wm^-1", &ops.Wm_inv},
      {"Wm", &ops.W_m},       {"Wd", &ops.W_d},     {"A", &ops.penalty.A},
      {"N", &ns.N},           {"M^-1", &M_inv},
  };

  double worst = 0.0;
  std::ofstream rep(out + "/dottest.txt");
  for (const auto& e : entries) {
    double err = dot_test(*e.op, trials, seed);
    worst = std::max(worst, err);
    std::printf("%-10s max relative dot-test error %.3e\n", e.name, err);
    rep << e.name << " " << err << "\n";
  }
  cfg.write_manifest(out + "/manifest.txt", "dottest", now_seconds(start));
  std::printf("dottest: worst %.3e (threshold 1e-9), %.1f s\n", worst, now_seconds(start));
  return worst <= 1e-9 ? kExitOk : kExitThreshold;
}

int cmd_invert(const RunConfig& cfg) {
  cfg.validate("invert");
  auto start = std::chrono::steady_clock::now();
  std::string out = prepare_out(cfg);
  Scenario scn = cfg.scenario();
  Gather d = load_or_make_data(cfg, scn);
  Medium inv_medium = cfg.inversion_medium(scn);
  InversionOps ops = build_inversion_ops(scn, inv_medium);

  double alpha = cfg.get_num("alpha", scn.alpha);
  int max_iter = cfg.get_int("max_iter", 100);
  double tol = cfg.get_num("tol", 1e-6);
  std::string method = cfg.get("method", "pcg");
  bool compare = cfg.get_int("compare", 0) != 0;

  InversionProblem prob = build_problem(ops, d, alpha);

  Gather h(ops.S.domain);
  if (method == "approx") {
    h = approx_inverse(d, ops.V);
  } else if (compare) {
    SolveReport pcg_rep = pcg(prob, max_iter, tol);
    int k_ref = std::min(10, pcg_rep.iterations);
    SolveReport cg_rep = cg(prob, max_iter, tol * 1e-3);
    double ratio = speedup_at(cg_rep, pcg_rep, k_ref);
    std::ofstream joint(out + "/compare.csv");
    joint << "iter,cg_normal_residual,cg_relative,pcg_normal_residual,pcg_relative\n";
    std::size_t rows = std::max(cg_rep.normal_residual.size(), pcg_rep.normal_residual.size());
    for (std::size_t k = 0; k < rows; ++k) {
      joint << k << ",";
      if (k < cg_rep.normal_residual.size())
        joint << cg_rep.normal_residual[k] << ","
              << cg_rep.normal_residual[k] / cg_rep.normal_residual[0] << ",";
      else
        joint << ",,";
      if (k < pcg_rep.normal_residual.size())
        joint << pcg_rep.normal_residual[k] << ","
              << pcg_rep.normal_residual[k] / pcg_rep.normal_residual[0] << "\n";
      else
        joint << ",\n";
    }
    cg_rep.write_csv(out + "/residuals_cg.csv");
    pcg_rep.write_csv(out + "/residuals_pcg.csv");
    std::printf("compare: baseline needs %.2fx the preconditioned iterations to reach the "
                "level at iteration %d (alpha=%g)\n",
                ratio, k_ref, alpha);
    std::ofstream summary(out + "/summary.txt");
    summary << "alpha=" << alpha << "\nspeedup_at_k" << k_ref << "=" << ratio << "\n";
    h = pcg_rep.h;
  } else if (method == "cg") {
    SolveReport rep = cg(prob, max_iter, tol);
    rep.write_csv(out + "/residuals.csv");
    h = rep.h;
    std::printf("cg: %d iterations, %s\n", rep.iterations, rep.stop_reason.c_str());
  } else {
    SolveReport rep = pcg(prob, max_iter, tol);
    rep.write_csv(out + "/residuals.csv");
    h = rep.h;
    std::printf("pcg: %d iterations, %s\n", rep.iterations, rep.stop_reason.c_str());
  }

  Gather resim = ops.S.apply(h);
  Gather diff = gather_axpy(-1.0, d, resim);
  double clip = cfg.has("clip_from") ? read_pgm_clip(cfg.get("clip_from", "")) : 0.0;
  export_gather(out, "h", h);
  write_xsg(out + "/d.xsg", d);
  write_pgm_gather(out + "/d.pgm", d, clip);
  double d_clip = read_pgm_clip(out + "/d.pgm");
  export_gather(out, "resim", resim, d_clip);
  export_gather(out, "diff", diff, d_clip);
  double rel = inband_rel_l2(resim, d, 1.0, 2.5, 7.5, 12.5, 10);
  std::printf("invert(%s): in-band relative data error %.4f, %.1f s\n", method.c_str(), rel,
              now_seconds(start));
  cfg.write_manifest(out + "/manifest.txt", "invert", now_seconds(start));
  return kExitOk;
}

int cmd_lambda(const RunConfig& cfg) {
  cfg.validate("lambda");
  auto start = std::chrono::steady_clock::now();
  std::string out = prepare_out(cfg);
  Scenario scn = cfg.scenario();
  Gather phi = cfg.has("data") ? read_xsg(cfg.get("data", ""))
                               : make_downgoing_sources(scn).ps_p;
  LinearOp lam = lambda_tilde(slab_at(scn, scn.medium, scn.z_src));
  Gather a = lam.apply(Gather(lam.domain, phi.values()));
  Gather b = lam.adjoint_apply(Gather(lam.domain, phi.values()));
  Gather sym = gather_scale(0.5, gather_axpy(1.0, a, b));
  Gather diff = gather_axpy(-1.0, b, a);
  export_gather(out, "lam", a);
  double clip = read_pgm_clip(out + "/lam.pgm");
  export_gather(out, "lamt", b, clip);
  export_gather(out, "lamsym", sym, clip);
  export_gather(out, "lamdiff", diff, clip);
  double asym = gather_norm(diff) / gather_norm(a);
  std::printf("lambda: relative asymmetry %.4f, %.1f s\n", asym, now_seconds(start));
  cfg.write_manifest(out + "/manifest.txt", "lambda", now_seconds(start));
  return kExitOk;
}

std::vector<SymbolCheck> run_symbol_checks(const Scenario& scn,
                                           const std::vector<double>& slowness_ratios,
                                           double probe_hz) {
  // refine the time axis so half-step centering losses stay far below the
  // tolerance under test; the operator's spatial grid is unchanged
  const int refine = 4;
  TimeAxis fine(refine * scn.time.nt, scn.time.dt / refine, scn.time.t0);
  SlabConfig slab{scn.z_src, scn.delta_z, scn.x_coords, fine, scn.medium, scn.scheme, true};
  LinearOp lam = lambda_tilde(slab);

  int ic = static_cast<int>(std::lround((scn.x_penalty_center - scn.medium.grid.x0) /
                                        scn.medium.grid.dx));
  int jc = static_cast<int>(std::lround((scn.z_src - scn.medium.grid.z0) /
                                        scn.medium.grid.dz));
  double kappa = scn.medium.kappa(ic, jc), rho = scn.medium.rho(ic, jc);
  double c = std::sqrt(kappa / rho);
  double x_mid = 0.5 * (scn.x_coords.front() + scn.x_coords.back());
  double aperture = scn.x_coords.back() - scn.x_coords.front();
  double t_mid = scn.time.t0 + 0.45 * (scn.time.t_end() - scn.time.t0);

  std::vector<SymbolCheck> checks;
  for (double s : slowness_ratios) {
    Gather probe(lam.domain);
    double slowness = std::sqrt(s) / c;
    double sigma_x = aperture / 7.0, sigma_t = 0.5;
    for (int r = 0; r < probe.ntr(); ++r) {
      double x = probe.x_coords()[r];
      double wx = std::exp(-0.5 * std::pow((x - x_mid) / sigma_x, 2));
      for (int n = 0; n < probe.nt(); ++n) {
        double t = probe.time().t(n);
        double wt = std::exp(-0.5 * std::pow((t - t_mid) / sigma_t, 2));
        probe.at(r, n) =
            wx * wt * std::cos(2.0 * M_PI * probe_hz * (t - t_mid - slowness * (x - x_mid)));
      }
    }
    double measured = central_rms_ratio(lam.apply(probe), probe);
    double expected = 2.0 * std::sqrt(1.0 - s) / std::sqrt(kappa * rho);
    checks.push_back({s, measured, expected, std::abs(measured - expected) / expected});
  }
  return checks;
}

int cmd_symbol_check(const RunConfig& cfg) {
  cfg.validate("symbol-check");
  auto start = std::chrono::steady_clock::now();
  std::string out = prepare_out(cfg);
  Scenario scn = cfg.scenario();
  auto checks = run_symbol_checks(scn, {0.0, 0.25, 0.5});
  double worst = 0.0;
  std::ofstream rep(out + "/symbol_check.txt");
  for (const auto& c : checks) {
    std::printf("slowness ratio %.2f: thin-slab %.4e vs symbol %.4e (rel err %.3f)\n",
                c.slowness_ratio, c.measured, c.expected, c.rel_error);
    rep << c.slowness_ratio << " " << c.measured << " " << c.expected << " " << c.rel_error
        << "\n";
    worst = std::max(worst, c.rel_error);
  }
  std::printf("symbol-check: 4/amplitude at normal incidence = %.4e kg m^-2 s^-1\n",
              4.0 / checks.front().measured);
  cfg.write_manifest(out + "/manifest.txt", "symbol-check", now_seconds(start));
  std::printf("symbol-check: worst deviation %.3f (threshold 0.05), %.1f s\n", worst,
              now_seconds(start));
  return worst <= 0.05 ? kExitOk : kExitThreshold;
}

EnergyIdentity run_energy_identity(const Scenario& scn) {
  // enlarge the homogeneous domain so a post-source, pre-boundary plateau
  // exists; coordinates stay absolute so the acquisition geometry carries over
  const Grid2D& g0 = scn.medium.grid;
  double margin = 5800.0;
  double x_lo = scn.x_coords.front() - margin, x_hi = scn.x_coords.back() + margin;
  double z_lo = scn.z_src - margin, z_hi = scn.z_src + margin;
  int nx = static_cast<int>(std::ceil((x_hi - x_lo) / g0.dx)) + 1;
  int nz = static_cast<int>(std::ceil((z_hi - z_lo) / g0.dz)) + 1;
  Grid2D big(nx, nz, g0.dx, g0.dz, x_lo, z_lo);
  int ic = nx / 2, jc = nz / 2;
  (void)ic;
  Medium medium = Medium::homogeneous(big, scn.medium.kappa(0, 0), scn.medium.rho(0, 0));
  (void)jc;

  // the preset downgoing defect source, rebuilt in the preset-sized domain
  Scenario src_scn = scn;
  src_scn.medium = Medium::homogeneous(g0, scn.medium.kappa(0, 0), scn.medium.rho(0, 0));
  DowngoingFields df = make_downgoing_sources(src_scn);

  // time axis long enough to reach the plateau
  double t_end = 2.4;
  int nt = static_cast<int>(std::floor((t_end - scn.time.t0) / scn.time.dt)) + 1;
  TimeAxis time(nt, scn.time.dt, scn.time.t0);
  GatherSpec src_spec(scn.z_src, scn.x_coords, time);
  SourceVector sv = SourceVector::zeros(src_spec);
  for (int r = 0; r < df.h_s.ntr(); ++r)
    for (int n = 0; n < std::min(df.h_s.nt(), nt); ++n) sv.h.at(r, n) = df.h_s.at(r, n);

  EnergyIdentity out;
  PropagationConfig pc{medium, scn.scheme, time, src_spec, {scn.z_src}, scn.x_coords,
                       Direction::causal};
  SurfacePropagator prop(pc);
  StepObserver obs = [&](int n, const AcousticState& st) {
    if ((n % 5) == 4) {
      out.times.push_back(time.t(n));
      out.energies.push_back(energy(st, medium));
    }
  };
  auto rec = prop.forward(sv, obs);
  Gather ps_p = rec[0].p;

  // plateau window: the source gather is quiet and the fronts are still
  // inside the domain
  double t_plateau_lo = 1.9, t_plateau_hi = 2.3;
  double emin = 1e300, emax = 0.0;
  for (std::size_t q = 0; q < out.times.size(); ++q)
    if (out.times[q] >= t_plateau_lo && out.times[q] <= t_plateau_hi) {
      emin = std::min(emin, out.energies[q]);
      emax = std::max(emax, out.energies[q]);
    }
  out.plateau = 0.5 * (emin + emax);
  out.plateau_spread = (emax - emin) / out.plateau;

  // quadratic form on a refined slab (dz/2, dt/4): the same continuum
  // operator with the half-cell stagger and midpoint-centering quadrature
  // losses pushed well below the tolerance under test
  const int rt = 4;
  double dz_f = g0.dz / 2.0;
  double reach = 400.0;
  int nz_f = static_cast<int>(std::lround(2.0 * reach / dz_f)) + 1;
  Grid2D slab_grid(g0.nx, nz_f, g0.dx, dz_f, g0.x0, scn.z_src - reach);
  Medium slab_medium =
      Medium::homogeneous(slab_grid, scn.medium.kappa(0, 0), scn.medium.rho(0, 0));
  TimeAxis fine(rt * nt, time.dt / rt, time.t0);
  Gather phi = resample_time_refine(ps_p, rt);
  SlabConfig slab{scn.z_src, scn.delta_z, scn.x_coords, fine, slab_medium, scn.scheme,
                  true};
  LinearOp lam = lambda_tilde(slab);
  Gather lphi = Gather(phi.spec(), lam.apply(Gather(lam.domain, phi.values())).values());
  Gather ltphi =
      Gather(phi.spec(), lam.adjoint_apply(Gather(lam.domain, phi.values())).values());
  Gather sym = gather_scale(0.5, gather_axpy(1.0, lphi, ltphi));
  out.quadratic_form = gather_dot(phi, sym);
  out.rel_error = std::abs(out.quadratic_form - out.plateau) / out.plateau;
  return out;
}

int cmd_energy(const RunConfig& cfg) {
  cfg.validate("energy");
  auto start = std::chrono::steady_clock::now();
  std::string out = prepare_out(cfg);
  Scenario scn = cfg.scenario();
  EnergyIdentity e = run_energy_identity(scn);
  std::ofstream csv(out + "/energy.csv");
  csv << "t,energy\n";
  for (std::size_t q = 0; q < e.times.size(); ++q)
    csv << e.times[q] << "," << e.energies[q] << "\n";
  std::printf("energy: plateau %.6e J/m (spread %.2e), quadratic form %.6e, rel err %.4f "
              "(%.1f s)\n",
              e.plateau, e.plateau_spread, e.quadratic_form, e.rel_error,
              now_seconds(start));
  cfg.write_manifest(out + "/manifest.txt", "energy", now_seconds(start));
  return kExitOk;
}

}  // namespace xs::cli
