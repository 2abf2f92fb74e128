#include <filesystem>
#include <fstream>

#include "commands.hpp"
#include "doctest.h"
#include "xs/gather_io.hpp"

using namespace xs;
using namespace xs::cli;

namespace {
namespace fs = std::filesystem;

std::string tmpdir(const std::string& name) {
  std::string p = "/tmp/xswave_cli_" + name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

RunConfig base_config(const std::string& out) {
  RunConfig cfg;
  cfg.set("scenario", "paper-homog");
  cfg.set("out", out);
  cfg.set("threads", "1");
  return cfg;
}
}  // namespace

TEST_SUITE("cli") {

TEST_CASE("unknown config keys are rejected") {
  RunConfig cfg = base_config("/tmp/xswave_cli_unused");
  cfg.set("scheem.k", "4");
  CHECK_THROWS_AS(cfg.validate("simulate"), ConfigError);
}

TEST_CASE("config file parsing: comments, spacing, bad lines") {
  std::string path = "/tmp/xswave_cli_cfg.txt";
  {
    std::ofstream out(path);
    out << "# comment\n  scenario = paper-lens \n\nalpha=1e-3\n";
  }
  RunConfig cfg = RunConfig::from_file(path);
  CHECK(cfg.get("scenario", "") == "paper-lens");
  CHECK(cfg.get_num("alpha", 0.0) == 1e-3);
  {
    std::ofstream out(path);
    out << "scenario paper-lens\n";
  }
  CHECK_THROWS_AS(RunConfig::from_file(path), ConfigError);
}

TEST_CASE("scenario assembly applies scheme overrides and rejects bad values") {
  RunConfig cfg = base_config("/tmp/xswave_cli_unused");
  cfg.set("scheme.k", "3");
  Scenario s = cfg.scenario();
  CHECK(s.scheme.half_order == 3);
  cfg.set("scenario", "not-a-preset");
  CHECK_THROWS_AS(cfg.validate("simulate"), ConfigError);
}

TEST_CASE("simulate writes the acquisition gathers and a loadable manifest") {
  std::string out = tmpdir("sim");
  RunConfig cfg = base_config(out);
  CHECK(cmd_simulate(cfg) == 0);
  Gather d = read_xsg(out + "/d.xsg");
  CHECK(d.ntr() == 201);
  CHECK(d.depth() == 1000.0);
  Gather hs = read_xsg(out + "/hs.xsg");
  CHECK(hs.depth() == 3000.0);
  CHECK(fs::exists(out + "/d.pgm"));
  RunConfig manifest = RunConfig::from_file(out + "/manifest.txt");
  manifest.validate("simulate");
  CHECK(manifest.get("scenario", "") == "paper-homog");
}

TEST_CASE("re-running from the manifest reproduces files bit for bit") {
  std::string out1 = tmpdir("rep1");
  RunConfig cfg = base_config(out1);
  REQUIRE(cmd_simulate(cfg) == 0);
  RunConfig again = RunConfig::from_file(out1 + "/manifest.txt");
  std::string out2 = tmpdir("rep2");
  again.set("out", out2);
  REQUIRE(cmd_simulate(again) == 0);
  for (const char* f : {"/d.xsg", "/hs.xsg", "/fs.xsg", "/ps_p.xsg"})
    CHECK(slurp(out1 + f) == slurp(out2 + f));
}

TEST_CASE("a manifest written by another command is rejected") {
  std::string out = tmpdir("wrongcmd");
  RunConfig cfg = base_config(out);
  REQUIRE(cmd_simulate(cfg) == 0);
  RunConfig manifest = RunConfig::from_file(out + "/manifest.txt");
  CHECK_THROWS_AS(cmd_lambda(manifest), ConfigError);
}

TEST_CASE("zero wavelet produces all-zero outputs") {
  std::string out = tmpdir("zero");
  RunConfig cfg = base_config(out);
  cfg.set("wavelet.scale", "0");
  CHECK(cmd_simulate(cfg) == 0);
  CHECK(read_xsg(out + "/d.xsg").max_abs() == 0.0);
  CHECK(read_xsg(out + "/hs.xsg").max_abs() == 0.0);
}

TEST_CASE("approximate inversion command round trip") {
  std::string simdir = tmpdir("invsim");
  RunConfig sim = base_config(simdir);
  sim.set("scenario", "paper-lens");
  REQUIRE(cmd_simulate(sim) == 0);

  std::string out = tmpdir("inv");
  RunConfig cfg = base_config(out);
  cfg.set("scenario", "paper-lens");
  cfg.set("method", "approx");
  cfg.set("invert_medium", "homog");
  cfg.set("data", simdir + "/d.xsg");
  CHECK(cmd_invert(cfg) == 0);
  CHECK(fs::exists(out + "/h.xsg"));
  CHECK(fs::exists(out + "/resim.xsg"));
  CHECK(fs::exists(out + "/diff.xsg"));
  // difference raster reuses the data clip
  CHECK(read_pgm_clip(out + "/diff.pgm") == read_pgm_clip(out + "/d.pgm"));
}

TEST_CASE("lambda command scales linearly and reports asymmetry") {
  std::string simdir = tmpdir("lamsim");
  RunConfig sim = base_config(simdir);
  REQUIRE(cmd_simulate(sim) == 0);

  std::string out1 = tmpdir("lam1");
  RunConfig cfg = base_config(out1);
  cfg.set("data", simdir + "/ps_p.xsg");
  CHECK(cmd_lambda(cfg) == 0);

  // doubled input gives exactly doubled output
  Gather phi = read_xsg(simdir + "/ps_p.xsg");
  write_xsg(simdir + "/ps_p2.xsg", gather_scale(2.0, phi));
  std::string out2 = tmpdir("lam2");
  RunConfig cfg2 = base_config(out2);
  cfg2.set("data", simdir + "/ps_p2.xsg");
  CHECK(cmd_lambda(cfg2) == 0);
  Gather a = read_xsg(out1 + "/lam.xsg");
  Gather b = read_xsg(out2 + "/lam.xsg");
  for (int r = 0; r < a.ntr(); r += 25)
    for (int n = 0; n < a.nt(); n += 97)
      CHECK(b.at(r, n) ==
            doctest::Approx(2.0 * a.at(r, n)).epsilon(1e-6).scale(a.max_abs()));
}

TEST_CASE("dottest command passes its own threshold on a reduced geometry") {
  std::string out = tmpdir("dot");
  RunConfig cfg = base_config(out);
  cfg.set("dottest.trials", "1");
  cfg.set("dottest.ntr", "21");
  cfg.set("dottest.nt", "129");
  CHECK(cmd_dottest(cfg) == 0);
  CHECK(fs::exists(out + "/dottest.txt"));
}

}  // TEST_SUITE
