#pragma once

// CSV serialization (17 significant digits, one header row) and run
// manifests with SHA-256 checksums.

#include <string>
#include <vector>

#include "peskin/diagnostics.hpp"
#include "peskin/dynamics.hpp"
#include "peskin/lagrangian.hpp"

namespace peskin {

/// Rows of numbers under a header. Throws InputError on malformed files.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

// grid: x,value
void write_grid_csv(const std::string& path, const GridField& g);
GridField read_grid_csv(const std::string& path);

// spectral: k,re,im
void write_spectral_csv(const std::string& path, const SpectralField& f);
SpectralField read_spectral_csv(const std::string& path, int capacity);

// records.csv: record_columns()
void write_records_csv(const std::string& path, const std::vector<DiagRecord>& records);
std::vector<DiagRecord> read_records_csv(const std::string& path);

// states.csv: t,k,re,im
void write_states_csv(const std::string& path, const Trajectory& traj);
std::vector<SpectralField> read_states_csv(const std::string& path, int capacity);

// s,X
void write_string_csv(const std::string& path, const StringConfig& c);
// t,i,x
void write_flow_csv(const std::string& path, const FlowMap& flow);

// name,status,worst,t_worst,tolerance,note
void write_checks_csv(const std::string& path, const std::vector<CheckReport>& checks);
std::string checks_summary(const std::vector<CheckReport>& checks);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

std::string sha256_file(const std::string& path);

struct Manifest {
  std::string version;
  std::string command;
  std::string started;
  std::string finished;
  std::string termination;
  std::string config_echo;
  /// (checksum, file name relative to the run directory)
  std::vector<std::pair<std::string, std::string>> files;

  void add_file(const std::string& dir, const std::string& name);
  void write(const std::string& dir) const;
  static Manifest read(const std::string& dir);
  /// Throws ChecksumError on a missing or altered file.
  void verify(const std::string& dir) const;
};

inline constexpr const char* kManifestName = "manifest.txt";
inline constexpr const char* kArtifactVersion = "1.0.0";

std::string utc_timestamp();

}  // namespace peskin
