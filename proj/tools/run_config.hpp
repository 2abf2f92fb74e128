#pragma once

#include <map>
#include <set>
#include <string>

#include "xs/fd_scheme.hpp"
#include "xs/scenarios.hpp"

namespace xs::cli {

/// Flat key=value run configuration with section prefixes (scheme.k, ...).
/// Unknown keys are rejected at validation so typos fail fast. A manifest
/// is the same format plus '#' comments and reproduces the run bit for bit
/// at threads=1.
class RunConfig {
public:
  RunConfig() = default;

  static RunConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;

  /// Throws ConfigError on any key outside the known set.
  void validate(const std::string& command) const;

  void write_manifest(const std::string& path, const std::string& command,
                      double wall_seconds) const;

  Scenario scenario() const;           // scenario key + scheme overrides
  Medium inversion_medium(const Scenario& scn) const;  // invert_medium key

  const std::map<std::string, std::string>& entries() const { return kv_; }

private:
  std::map<std::string, std::string> kv_;
};

}  // namespace xs::cli
