#pragma once

// Exact finite mode system for band-limited solutions, explicit RK4 time
// stepping, initial-data preparation (clip + Fejer) and the simulation driver.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "peskin/record.hpp"
#include "peskin/torus_ops.hpp"

namespace peskin {

struct SimState {
  double t = 0.0;
  SpectralField field;
  long step_count = 0;
  double dt_last = 0.0;
};

/// How the initial datum is specified.
struct InitialSpec {
  enum class Kind { preset, coefficients, grid_file };
  Kind kind = Kind::preset;
  /// Preset name: constant, two_mode, single_mode, random, cos_power, step.
  std::string preset = "two_mode";
  std::map<std::string, double> params;
  /// Explicit coefficients c_0..c_K.
  std::vector<Complex> coefficients;
  /// Raw samples read from a grid CSV file.
  GridField grid;
  std::string grid_file;
};

struct RunConfig {
  InitialSpec initial;
  int capacity = 64;
  double clip_M = 1e6;
  int fejer_N = 0;  // 0 selects capacity + 1
  double cfl = 1.0;
  double dt_max = 0.1;
  double t_end = 1.0;
  double record_dt = 0.01;
  std::vector<double> snapshot_times;
  std::map<std::string, double> tolerances;
  double alpha = 0.1;
  int diag_grid = 512;
  /// Zero coefficients above the declared band limit after every RK stage.
  bool band_guard = true;

  int effective_fejer_N() const { return fejer_N > 0 ? fejer_N : capacity + 1; }
  double tolerance(const std::string& name, double fallback) const;
  /// Throws ConfigError on violated invariants.
  void validate() const;
};

enum class Termination { completed, positivity_failure, step_underflow };
const char* to_string(Termination t);

struct Snapshot {
  double t = 0.0;
  SpectralField field;
};

/// A finished (or aborted) run. `states[i]` is the field at `records[i].t`.
struct Trajectory {
  RunConfig config;
  std::vector<DiagRecord> records;
  std::vector<SpectralField> states;
  std::vector<Snapshot> snapshots;
  Termination termination = Termination::completed;
  std::string message;
  long steps = 0;
};

/// Time derivative of every coefficient:
/// dc_m = -m c_0 c_m - sum_{j>=1} 2(m+2j) c_{m+j} conj(c_j).
/// The sum runs over the full capacity. Requires c_0 > 0.
SpectralField galerkin_rhs(const SpectralField& f);

/// Hf * df/dx - f * Lambda f sampled on an M-point grid via pointwise
/// products. Throws AliasingError when M < 4K+1.
GridField rhs_grid_oracle(const SpectralField& f, int M);

/// Grid size for positivity checks.
inline int positivity_grid_size(const SpectralField& f) {
  return std::max(product_grid_size(f.capacity()), 16);
}

/// One classical RK4 step. Throws PositivityFailure if the new field is not
/// strictly positive on the check grid.
SimState step_rk4(const SimState& s, double dt, bool band_guard = true);

/// min(dt_max, cfl / (K f_max + guard)) with K the capacity. Throws
/// StepUnderflow below 1e-12.
double adaptive_dt(const SimState& s, double cfl, double dt_max);

inline constexpr double kDtFloor = 1e-12;

/// Evaluates a named preset on the grid or as coefficients.
/// Spectral presets: constant(a), two_mode(a, b), single_mode(a, k, b),
/// random(K, seed, amplitude). Grid presets: cos_power(a, p), step(low, high).
bool preset_is_spectral(const std::string& name);
SpectralField spectral_preset(const InitialSpec& spec, int capacity);
GridField grid_preset(const InitialSpec& spec, int M);

/// Clip into [1/clip_M, clip_M], analyze to capacity, apply Fejer(fejer_N).
/// Already band-limited spectral input inside the clip range is passed
/// through untouched.
SpectralField prepare_initial(const RunConfig& cfg);
SpectralField prepare_from_grid(const GridField& raw, const RunConfig& cfg);

/// Full run: records at multiples of record_dt (landing exactly), snapshots
/// at snapshot_times, and the running dissipation integral for the energy
/// identity.
Trajectory simulate(const RunConfig& cfg);

}  // namespace peskin
