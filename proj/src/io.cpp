#include "peskin/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "peskin/config.hpp"
#include "peskin/errors.hpp"

namespace peskin {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

void require_header(const CsvTable& t, const std::vector<std::string>& expected, const std::string& path) {
  if (t.header != expected) throw InputError("'" + path + "' has an unexpected header");
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
  t.header = split(trim(line), ',');
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& item : split(line, ',')) {
      try {
        size_t pos = 0;
        row.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError(path + ":" + std::to_string(lineno) + ": '" + item + "' is not a number");
      }
    }
    if (row.size() != t.header.size()) {
      throw InputError(path + ":" + std::to_string(lineno) + ": wrong column count");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(const std::string& path, const CsvTable& table) {
  auto out = open_out(path);
  for (size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
    out << "\n";
  }
}

void write_grid_csv(const std::string& path, const GridField& g) {
  CsvTable t{{"x", "value"}, {}};
  for (int j = 0; j < g.size(); ++j) t.rows.push_back({GridField::node(j, g.size()), g[j]});
  write_csv(path, t);
}

GridField read_grid_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  require_header(t, {"x", "value"}, path);
  GridField g;
  const int M = static_cast<int>(t.rows.size());
  if (M < 3) throw InputError("'" + path + "' needs at least three samples");
  for (int j = 0; j < M; ++j) {
    const auto& row = t.rows[static_cast<size_t>(j)];
    if (std::abs(row[0] - GridField::node(j, M)) > 1e-9) {
      throw InputError("'" + path + "': x column is not the uniform grid -pi + 2 pi j / M");
    }
    g.samples.push_back(row[1]);
  }
  return g;
}

void write_spectral_csv(const std::string& path, const SpectralField& f) {
  CsvTable t{{"k", "re", "im"}, {}};
  for (int k = 0; k <= f.capacity(); ++k) t.rows.push_back({static_cast<double>(k), f[k].real(), f[k].imag()});
  write_csv(path, t);
}

SpectralField read_spectral_csv(const std::string& path, int capacity) {
  const CsvTable t = read_csv(path);
  require_header(t, {"k", "re", "im"}, path);
  SpectralField f(capacity);
  for (const auto& row : t.rows) {
    const int k = static_cast<int>(row[0]);
    if (k < 0 || k > capacity) throw InputError("'" + path + "': mode index outside capacity");
    if (row[1] != 0.0 || row[2] != 0.0) f.set(k, {row[1], row[2]});
  }
  return f;
}

void write_records_csv(const std::string& path, const std::vector<DiagRecord>& records) {
  CsvTable t{record_columns(), {}};
  for (const auto& r : records) t.rows.push_back(record_values(r));
  write_csv(path, t);
}

std::vector<DiagRecord> read_records_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  require_header(t, record_columns(), path);
  std::vector<DiagRecord> out;
  for (const auto& row : t.rows) out.push_back(record_from_values(row));
  return out;
}

void write_states_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,k,re,im\n";
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const SpectralField& f = traj.states[i];
    const std::string t = fmt(traj.records[i].t);
    for (int k = 0; k <= f.capacity(); ++k) {
      out << t << "," << k << "," << fmt(f[k].real()) << "," << fmt(f[k].imag()) << "\n";
    }
  }
}

std::vector<SpectralField> read_states_csv(const std::string& path, int capacity) {
  const CsvTable t = read_csv(path);
  require_header(t, {"t", "k", "re", "im"}, path);
  std::vector<SpectralField> out;
  double current_t = 0.0;
  for (const auto& row : t.rows) {
    const int k = static_cast<int>(row[1]);
    if (k < 0 || k > capacity) throw InputError("'" + path + "': mode index outside capacity");
    if (k == 0) {
      out.emplace_back(capacity);
      current_t = row[0];
    } else if (out.empty() || row[0] != current_t) {
      throw InputError("'" + path + "': each state must start with k = 0");
    }
    if (row[2] != 0.0 || row[3] != 0.0) out.back().set(k, {row[2], row[3]});
  }
  return out;
}

void write_string_csv(const std::string& path, const StringConfig& c) {
  CsvTable t{{"s", "X"}, {}};
  for (int i = 0; i < c.size(); ++i) t.rows.push_back({c.s[static_cast<size_t>(i)], c.X[static_cast<size_t>(i)]});
  write_csv(path, t);
}

void write_flow_csv(const std::string& path, const FlowMap& flow) {
  auto out = open_out(path);
  out << "t,i,x\n";
  for (size_t r = 0; r < flow.times.size(); ++r) {
    const std::string t = fmt(flow.times[r]);
    for (size_t i = 0; i < flow.positions[r].size(); ++i) out << t << "," << i << "," << fmt(flow.positions[r][i]) << "\n";
  }
}

void write_checks_csv(const std::string& path, const std::vector<CheckReport>& checks) {
  auto out = open_out(path);
  out << "name,status,worst,t_worst,tolerance,note\n";
  for (const auto& c : checks) {
    out << c.name << "," << to_string(c.status) << "," << fmt(c.worst) << "," << fmt(c.t_worst) << ","
        << fmt(c.tolerance) << "," << quote(c.note) << "\n";
  }
}

std::string checks_summary(const std::vector<CheckReport>& checks) {
  std::ostringstream out;
  int failed = 0;
  for (const auto& c : checks) {
    out << std::left << std::setw(44) << c.name << std::setw(8) << to_string(c.status) << " worst "
        << std::setw(12) << std::setprecision(4) << std::scientific << c.worst << " t " << std::setw(10)
        << std::defaultfloat << std::setprecision(6) << c.t_worst << " tol " << std::setprecision(3) << c.tolerance;
    if (!c.note.empty()) out << "  " << c.note;
    out << "\n";
    if (!c.passed()) ++failed;
  }
  out << checks.size() - static_cast<size_t>(failed) << "/" << checks.size() << " checks passed\n";
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChecksumError("missing file '" + path + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

void Manifest::add_file(const std::string& dir, const std::string& name) {
  files.emplace_back(sha256_file((fs::path(dir) / name).string()), name);
}

void Manifest::write(const std::string& dir) const {
  std::ostringstream out;
  out << "version = " << version << "\n"
      << "command = " << command << "\n"
      << "started = " << started << "\n"
      << "finished = " << finished << "\n"
      << "termination = " << termination << "\n"
      << "[config]\n"
      << config_echo << "[files]\n";
  for (const auto& [sum, name] : files) out << sum << "  " << name << "\n";
  write_text((fs::path(dir) / kManifestName).string(), out.str());
}

Manifest Manifest::read(const std::string& dir) {
  const std::string path = (fs::path(dir) / kManifestName).string();
  if (!fs::exists(path)) throw ChecksumError("no manifest in '" + dir + "'");
  std::istringstream in(read_text(path));
  Manifest m;
  std::string line;
  enum { header, config, files } section = header;
  while (std::getline(in, line)) {
    if (line == "[config]") {
      section = config;
      continue;
    }
    if (line == "[files]") {
      section = files;
      continue;
    }
    if (section == config) {
      m.config_echo += line + "\n";
    } else if (section == files) {
      const auto sep = line.find("  ");
      if (sep == std::string::npos) throw ChecksumError("malformed manifest line '" + line + "'");
      m.files.emplace_back(line.substr(0, sep), line.substr(sep + 2));
    } else {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 3);
      if (key == "version") m.version = value;
      if (key == "command") m.command = value;
      if (key == "started") m.started = value;
      if (key == "finished") m.finished = value;
      if (key == "termination") m.termination = value;
    }
  }
  return m;
}

void Manifest::verify(const std::string& dir) const {
  for (const auto& [sum, name] : files) {
    const std::string path = (fs::path(dir) / name).string();
    if (!fs::exists(path)) throw ChecksumError("file '" + name + "' listed in the manifest is missing");
    if (sha256_file(path) != sum) throw ChecksumError("checksum mismatch for '" + name + "'");
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace peskin
