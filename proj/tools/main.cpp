#include <cstdio>

#include "CLI11.hpp"
#include "commands.hpp"
#include "xs/version.hpp"

using namespace xs::cli;

namespace {

// flags shared by every subcommand, merged over an optional --config file
struct CommonArgs {
  std::string config_path;
  std::string out;
  int threads = -1;
  long long seed = -1;
  std::string scenario;
};

void add_common(CLI::App* app, CommonArgs& a) {
  app->add_option("--config", a.config_path, "key=value config file (a manifest works)");
  app->add_option("--out", a.out, "output directory");
  app->add_option("--threads", a.threads, "worker threads (1 = bit reproducible)");
  app->add_option("--seed", a.seed, "random seed for probe vectors");
  app->add_option("--scenario", a.scenario, "paper-homog | paper-lens");
}

RunConfig assemble(const CommonArgs& a, const std::vector<std::pair<std::string, std::string>>& extra) {
  RunConfig cfg;
  if (!a.config_path.empty()) cfg = RunConfig::from_file(a.config_path);
  if (!a.out.empty()) cfg.set("out", a.out);
  if (a.threads >= 0) cfg.set("threads", std::to_string(a.threads));
  if (a.seed >= 0) cfg.set("seed", std::to_string(a.seed));
  if (!a.scenario.empty()) cfg.set("scenario", a.scenario);
  for (const auto& [k, v] : extra)
    if (!v.empty()) cfg.set(k, v);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D acoustic surface-source modeling and inversion toolkit"};
  app.set_version_flag("--version", xs::kVersion);
  app.require_subcommand(1);

  CommonArgs common;
  std::string alpha, delta_z, max_iter, tol, method, invert_medium, data, clip_from,
      wavelet_scale, compare, trials;

  CLI::App* sim = app.add_subcommand("simulate", "run a preset and export the gathers");
  add_common(sim, common);
  sim->add_option("--wavelet-scale", wavelet_scale, "scale factor on the source wavelet");

  CLI::App* dot = app.add_subcommand("dottest", "adjoint dot tests over every operator");
  add_common(dot, common);
  dot->add_option("--trials", trials, "pseudorandom trials per operator");
  dot->add_option("--alpha", alpha, "penalty weight used in N and M^-1");

  CLI::App* inv = app.add_subcommand("invert", "source estimation from a data gather");
  add_common(inv, common);
  inv->add_option("--method", method, "approx | cg | pcg");
  inv->add_option("--alpha", alpha, "penalty weight");
  inv->add_option("--max-iter", max_iter, "iteration cap");
  inv->add_option("--tol", tol, "relative normal-residual tolerance");
  inv->add_option("--invert-medium", invert_medium, "homog | lens | same");
  inv->add_option("--data", data, "XSG1 data gather (default: simulate the scenario)");
  inv->add_option("--clip-from", clip_from, "reuse the clip of this PGM for rasters");
  inv->add_flag_callback("--compare", [&] { compare = "1"; },
                         "run cg and pcg on the same problem and report the speedup");

  CLI::App* lam = app.add_subcommand("lambda", "apply the pressure-to-source operator");
  add_common(lam, common);
  lam->add_option("--data", data, "input gather (default: scenario pressure trace)");
  lam->add_option("--delta-z", delta_z, "auxiliary datum offset, m");

  CLI::App* en = app.add_subcommand("energy", "radiated-energy identity check");
  add_common(en, common);

  CLI::App* sym = app.add_subcommand("symbol-check", "thin-slab amplitude vs the symbol");
  add_common(sym, common);

  CLI11_PARSE(app, argc, argv);

  std::vector<std::pair<std::string, std::string>> extra{
      {"alpha", alpha},       {"delta_z", delta_z},
      {"max_iter", max_iter}, {"tol", tol},
      {"method", method},     {"invert_medium", invert_medium},
      {"data", data},         {"clip_from", clip_from},
      {"wavelet.scale", wavelet_scale}, {"compare", compare},
      {"dottest.trials", trials},
  };

  try {
    RunConfig cfg = assemble(common, extra);
    if (sim->parsed()) return cmd_simulate(cfg);
    if (dot->parsed()) return cmd_dottest(cfg);
    if (inv->parsed()) return cmd_invert(cfg);
    if (lam->parsed()) return cmd_lambda(cfg);
    if (en->parsed()) return cmd_energy(cfg);
    if (sym->parsed()) return cmd_symbol_check(cfg);
  } catch (const xs::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const xs::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitConfig;
  } catch (const xs::NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}
