#pragma once

// Flat dotted-key configuration ("key = value" per line, '#' comments) and
// its translation into a RunConfig.

#include <map>
#include <string>
#include <vector>

#include "peskin/diagnostics.hpp"
#include "peskin/dynamics.hpp"

namespace peskin {

class Config {
 public:
  static Config parse_text(const std::string& text, const std::string& origin = "<text>");
  static Config parse_file(const std::string& path);
  /// Every recognised key with its default value.
  static Config defaults();

  /// "key=value"; throws ConfigError on malformed input.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;

  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  /// Defaults overlaid with this config's values; rejects unknown keys.
  Config resolved() const;
  /// Sorted "key = value" lines.
  std::string echo() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

RunConfig run_config_from(const Config& resolved);

/// Lagrangian options: particle count and RK4 substeps per record interval.
struct LagrangianOptions {
  int particles = 2048;
  int substeps = 4;
};
LagrangianOptions lagrangian_options_from(const Config& resolved);

/// Reads "name = value" constants; missing file yields the defaults.
EmpiricalConstants load_constants(const std::string& path);
void save_constants(const EmpiricalConstants& c, const std::string& path, const std::string& provenance);

}  // namespace peskin
