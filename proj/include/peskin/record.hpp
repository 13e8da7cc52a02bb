#pragma once

// One time slice of every monitored scalar, plus the fixed context derived
// from the initial datum that several monitors are measured against.

#include <string>
#include <vector>

#include "peskin/torus_ops.hpp"

namespace peskin {

struct DiagRecord {
  double t = 0.0;
  double fbar = 0.0;
  double fmin = 0.0;
  double fmax = 0.0;
  double norm_L1_f = 0.0;
  double norm_L2_f = 0.0;
  double norm_L4_f = 0.0;
  double norm_L1_F = 0.0;
  double norm_L2_F = 0.0;
  double norm_L4_F = 0.0;
  double hhalf_f = 0.0;
  double hhalf_lnf = 0.0;
  double h1_sqrtf = 0.0;
  double entropy_FlnF = 0.0;
  double dissipation = 0.0;
  double energy_residual = 0.0;
  double dxf_min = 0.0;
  double dxf_max = 0.0;
  double wiener01 = 0.0;
  double wiener01_nu = 0.0;
  double holder_alpha = 0.0;
  double hminus_half_F = 0.0;
  double w1_to_initial = 0.0;
};

/// Column names of records.csv, in serialization order.
const std::vector<std::string>& record_columns();
std::vector<double> record_values(const DiagRecord& r);
DiagRecord record_from_values(const std::vector<double>& values);

/// Quantities of the initial datum that stay fixed over a run.
struct InitialContext {
  int grid = 512;            // diagnostics grid size
  double alpha = 0.1;        // Holder exponent
  double norm_L1_f0 = 0.0;   // ||f0||_{L1}
  double norm_L1_F0 = 0.0;   // ||F0||_{L1}, conserved
  double f_inf = 0.0;        // 2 pi / ||F0||_{L1}
  double norm_inf_f0 = 0.0;  // max f0
  double norm_inf_F0 = 0.0;  // max 1/f0
  double wiener01_f0 = 0.0;
  GridField F0;              // 1/f0 on the diagnostics grid
};

/// Builds the context for a run starting from `f0`.
InitialContext make_initial_context(const SpectralField& f0, int grid, double alpha);

/// Diagnostics grid actually used for a field: at least the requested size
/// and at least 4K+1.
int diagnostics_grid_size(int requested, int band_limit);

/// Fills every field of a DiagRecord. `dissipation_integral` is the running
/// integral of int f Lambda f dx from 0 to t. Throws PositivityFailure for a
/// non-positive field.
DiagRecord record(double t, const SpectralField& f, const InitialContext& ctx,
                  double dissipation_integral);

}  // namespace peskin
