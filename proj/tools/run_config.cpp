#include "run_config.hpp"

#include <charconv>
#include <fstream>

#include "xs/version.hpp"

namespace xs::cli {

namespace {
const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "command",    "scenario",   "out",        "seed",        "threads",
      "alpha",      "delta_z",    "max_iter",   "tol",         "method",
      "compare",    "invert_medium", "clip_from", "data",      "wavelet.scale",
      "scheme.k",   "scheme.cfl_safety", "scheme.pml_width",  "scheme.pml_r0",
      "dottest.trials", "dottest.ntr", "dottest.nt", "lens.radius",
  };
  return keys;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}
}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) { kv_[key] = value; }

bool RunConfig::has(const std::string& key) const { return kv_.count(key) != 0; }

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double RunConfig::get_num(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  char* end = nullptr;
  double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0')
    throw ConfigError("config key '" + key + "': cannot parse number '" + it->second + "'");
  return v;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  double v = get_num(key, fallback);
  return static_cast<int>(v);
}

void RunConfig::validate(const std::string& command) const {
  for (const auto& [k, v] : kv_)
    if (!known_keys().count(k))
      throw ConfigError("unknown config key '" + k + "'");
  if (has("command") && get("command", "") != command)
    throw ConfigError("config was written for command '" + get("command", "") +
                      "', not '" + command + "'");
  std::string scen = get("scenario", "paper-lens");
  if (scen != "paper-lens" && scen != "paper-homog")
    throw ConfigError("scenario must be paper-homog or paper-lens, got '" + scen + "'");
  std::string method = get("method", "pcg");
  if (method != "approx" && method != "cg" && method != "pcg")
    throw ConfigError("method must be approx, cg, or pcg");
  std::string im = get("invert_medium", "homog");
  if (im != "homog" && im != "lens" && im != "same")
    throw ConfigError("invert_medium must be homog, lens, or same");
}

void RunConfig::write_manifest(const std::string& path, const std::string& command,
                               double wall_seconds) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "# run manifest, loadable with --config\n";
  out << "# version " << kVersion << ", wall " << wall_seconds << " s\n";
  out << "command=" << command << "\n";
  for (const auto& [k, v] : kv_)
    if (k != "command") out << k << "=" << v << "\n";
}

Scenario RunConfig::scenario() const {
  Scenario s = make_scenario(get("scenario", "paper-lens"));
  if (has("lens.radius") && get("scenario", "paper-lens") == "paper-lens")
    s.medium = build_lens(get_num("lens.radius", 600.0));
  FdScheme base = s.scheme;
  s.scheme = FdScheme(get_int("scheme.k", base.half_order),
                      get_num("scheme.cfl_safety", base.cfl_safety),
                      get_num("scheme.pml_width", base.pml_width),
                      get_num("scheme.pml_r0", base.pml_r0));
  double wscale = get_num("wavelet.scale", 1.0);
  if (wscale != 1.0)
    for (double& v : s.wavelet) v *= wscale;
  if (has("alpha")) s.alpha = get_num("alpha", s.alpha);
  if (has("delta_z")) s.delta_z = get_num("delta_z", s.delta_z);
  return s;
}

Medium RunConfig::inversion_medium(const Scenario& scn) const {
  std::string im = get("invert_medium", "homog");
  if (im == "same") return scn.medium;
  if (im == "lens") return build_lens(get_num("lens.radius", 600.0));
  return build_homogeneous();
}

}  // namespace xs::cli
