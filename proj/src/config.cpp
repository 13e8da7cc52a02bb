#include "peskin/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "peskin/errors.hpp"
#include "peskin/io.hpp"

namespace peskin {

namespace {

// Shortest text that parses back to the same double.
std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

/// Key families whose members are open-ended.
bool is_open_key(const std::string& key) {
  return starts_with(key, "initial.") || starts_with(key, "tol.") || starts_with(key, "sweep.");
}

}  // namespace

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    c.values_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

Config Config::defaults() {
  const RunConfig rc;
  const LagrangianOptions lo;
  Config c;
  c.set("initial.preset", rc.initial.preset);
  c.set("spectral.capacity", std::to_string(rc.capacity));
  c.set("init.clip_M", format_number(rc.clip_M));
  c.set("init.fejer_N", std::to_string(rc.fejer_N));
  c.set("dynamics.cfl", format_number(rc.cfl));
  c.set("dynamics.dt_max", format_number(rc.dt_max));
  c.set("dynamics.t_end", format_number(rc.t_end));
  c.set("dynamics.band_guard", rc.band_guard ? "true" : "false");
  c.set("output.record_dt", format_number(rc.record_dt));
  c.set("output.snapshot_times", "");
  c.set("output.svg", "false");
  c.set("diagnostics.alpha", format_number(rc.alpha));
  c.set("diagnostics.grid", std::to_string(rc.diag_grid));
  c.set("diagnostics.constants", "");
  c.set("lagrangian.particles", std::to_string(lo.particles));
  c.set("lagrangian.substeps", std::to_string(lo.substeps));
  return c;
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
  values_[key] = trim(assignment.substr(eq + 1));
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const {
  const std::string& v = raw(key);
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
  }
}

int Config::integer(const std::string& key) const {
  const double d = number(key);
  if (d != static_cast<double>(static_cast<long>(d))) {
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  return static_cast<int>(d);
}

bool Config::boolean(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  const std::string& v = raw(key);
  if (trim(v).empty()) return out;
  for (const auto& item : split(v, ',')) {
    Config tmp;
    tmp.set(key, item);
    out.push_back(tmp.number(key));
  }
  return out;
}

Config Config::resolved() const {
  Config out = defaults();
  for (const auto& [k, v] : values_) {
    if (!out.has(k) && !is_open_key(k)) throw ConfigError("unknown config key '" + k + "'");
    out.values_[k] = v;
  }
  return out;
}

std::string Config::echo() const {
  std::ostringstream out;
  for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
  return out.str();
}

RunConfig run_config_from(const Config& c) {
  RunConfig rc;
  rc.capacity = c.integer("spectral.capacity");
  rc.clip_M = c.number("init.clip_M");
  rc.fejer_N = c.integer("init.fejer_N");
  rc.cfl = c.number("dynamics.cfl");
  rc.dt_max = c.number("dynamics.dt_max");
  rc.t_end = c.number("dynamics.t_end");
  rc.band_guard = c.boolean("dynamics.band_guard");
  rc.record_dt = c.number("output.record_dt");
  rc.snapshot_times = c.numbers("output.snapshot_times");
  rc.alpha = c.number("diagnostics.alpha");
  rc.diag_grid = c.integer("diagnostics.grid");

  InitialSpec& init = rc.initial;
  init.preset = c.raw("initial.preset");
  for (const auto& [k, v] : c.values()) {
    if (starts_with(k, "tol.")) rc.tolerances[k.substr(4)] = c.number(k);
  }
  if (c.has("initial.coefficients")) {
    init.kind = InitialSpec::Kind::coefficients;
    for (const auto& item : split(c.raw("initial.coefficients"), ',')) {
      const auto colon = item.find(':');
      Config tmp;
      tmp.set("re", item.substr(0, colon));
      tmp.set("im", colon == std::string::npos ? "0" : item.substr(colon + 1));
      init.coefficients.emplace_back(tmp.number("re"), tmp.number("im"));
    }
  } else if (c.has("initial.file")) {
    init.kind = InitialSpec::Kind::grid_file;
    init.grid_file = c.raw("initial.file");
    init.grid = read_grid_csv(init.grid_file);
  } else {
    init.kind = InitialSpec::Kind::preset;
    for (const auto& [k, v] : c.values()) {
      if (!starts_with(k, "initial.") || k == "initial.preset") continue;
      init.params[k.substr(8)] = c.number(k);
    }
  }
  rc.validate();
  return rc;
}

LagrangianOptions lagrangian_options_from(const Config& c) {
  LagrangianOptions o;
  o.particles = c.integer("lagrangian.particles");
  o.substeps = c.integer("lagrangian.substeps");
  if (o.particles < 2) throw ConfigError("lagrangian.particles must be >= 2");
  if (o.substeps < 1) throw ConfigError("lagrangian.substeps must be >= 1");
  return o;
}

EmpiricalConstants load_constants(const std::string& path) {
  EmpiricalConstants ec;
  std::ifstream in(path);
  if (!in) return ec;
  std::stringstream ss;
  ss << in.rdbuf();
  const Config c = Config::parse_text(ss.str(), path);
  if (c.has("linf_bound_C")) ec.linf_bound_C = c.number("linf_bound_C");
  if (c.has("analyticity_C_star")) ec.analyticity_C_star = c.number("analyticity_C_star");
  ec.source = "calibrated (" + path + ")";
  return ec;
}

void save_constants(const EmpiricalConstants& c, const std::string& path, const std::string& provenance) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write constants file '" + path + "'");
  out << "# Empirical constants written by `peskin calibrate`.\n";
  std::istringstream prov(provenance);
  std::string line;
  while (std::getline(prov, line)) out << "# " << line << "\n";
  out << "linf_bound_C = " << format_number(c.linf_bound_C) << "\n";
  out << "analyticity_C_star = " << format_number(c.analyticity_C_star) << "\n";
}

}  // namespace peskin
