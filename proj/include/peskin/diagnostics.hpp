#pragma once

// Monitors for the a-priori estimates and identities satisfied by positive
// solutions, evaluated against a finished trajectory. Every check is a pure
// function of the trajectory.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "peskin/dynamics.hpp"
#include "peskin/record.hpp"
#include "peskin/torus_ops.hpp"

namespace peskin {

struct CheckReport {
  enum class Status { pass, fail, skipped };

  std::string name;
  Status status = Status::pass;
  double worst = 0.0;    // worst violation magnitude (or measured statistic)
  double t_worst = 0.0;  // time of the worst violation
  double tolerance = 0.0;
  std::string note;

  bool passed() const { return status != Status::fail; }
  static CheckReport make(std::string name, double worst, double t_worst, double tolerance,
                          std::string note = {});
  static CheckReport skipped(std::string name, std::string note);
};
const char* to_string(CheckReport::Status s);

/// Empirical constants produced by the `calibrate` subcommand.
struct EmpiricalConstants {
  double linf_bound_C = 1.0;  // fmax(t) <= C sqrt(||f0||_1 / t) for small t
  double analyticity_C_star = 1.0;
  std::string source = "uncalibrated default";
};

// ---------------------------------------------------------------------------
// Closed forms and helpers

/// Exact solution of the mode system restricted to {0, +-1}:
/// a' = -4 b^2, b' = -a b. Returns (fbar, |c_1|). Requires a0 > 2 b0 >= 0.
std::pair<double, double> two_mode_closed_form(double a0, double b0, double t);

/// Lower bound 8 ||F0||^{-1} exp(-coth(4 t / (pi ||F0||))); 0 at t = 0.
double min_lower_bound(double norm_L1_F0, double t);

/// Conservative analyticity radius nu(t) = 1/2 ln[(1 + e^{2 f_inf t}) / 2],
/// or 1/2 ln[theta + (1 - theta) e^{2 f_inf t}] when theta is supplied.
double analyticity_radius(double f_inf, double t, std::optional<double> theta = std::nullopt);

/// W1 distance on the circle between two non-negative grid densities of
/// equal mass. Each input is normalized to a probability density; the result
/// is min_c sum_i h |U_i - c| with U the cumulative of mu - nu, attained at
/// the median of U. Throws InputError on a relative mass mismatch > 1e-8.
double wasserstein1_circle(const GridField& mu, const GridField& nu);
/// Same, skipping the mass-mismatch check.
double wasserstein1_circle_unchecked(const GridField& mu, const GridField& nu);

/// Discrete sup of |g(x) - g(y)| / d(x, y)^alpha over a subsample of at most
/// `max_points` nodes; d is the circle distance. A lower bound on the true
/// semi-norm.
double holder_seminorm(const GridField& g, double alpha, int max_points = 512);

/// Extrema of a trigonometric polynomial, refined by Newton from the best
/// node of an M-point grid. Returns (min, max).
std::pair<double, double> refined_extrema(const SpectralField& f, int M);

/// Corrected-trapezoid running integral of q over the record states. The
/// time derivative of q is taken along the exact mode RHS by a centred
/// directional difference. Element i is int_0^{t_i} q.
std::vector<double> integrate_over_records(const Trajectory& traj,
                                           const std::function<double(const SpectralField&)>& q);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// Checks

/// Relative residual of 1/2 ||f||_1 + int_0^t ||f||^2_{H^1/2} - 1/2 ||f0||_1.
CheckReport check_energy_identity(const Trajectory& traj, double tol = 1e-6);

/// Relative drift of ||F||_{L1}; also reports the implied f_inf.
CheckReport check_conservation_F(const Trajectory& traj, double tol = 1e-6);

/// Monotonicity of a named record quantity. Quantities: Lp_f, Lp_F (p = 1,
/// 2, 4 checked together), L1_f, L2_f, L4_f, L1_F, L2_F, L4_F, fmax, fmin,
/// dxf_max, dxf_min, hhalf_lnf, h1_sqrtf, entropy_FlnF. Additive slack is
/// rel_slack * max |quantity|.
CheckReport check_monotone(const Trajectory& traj, const std::string& quantity,
                           double rel_slack = 1e-10);
const std::vector<std::string>& monotone_quantities();

/// Integrated entropy inequality: S(0) - S(t) >= int_0^t ||ln f||^2_{H^1/2}.
CheckReport check_entropy_dissipation(const Trajectory& traj, double rel_slack = 1e-10);

/// Explicit pointwise bounds: the minimum lower bound at every record, the
/// L1 -> Linf bound with an empirical constant, and the log-log slope of
/// fmax on [t_lo, 1/||f0||_1] (must be >= -1/2 - slope_margin).
std::vector<CheckReport> check_explicit_bounds(const Trajectory& traj,
                                               const EmpiricalConstants& constants = {},
                                               double t_lo = 1e-3, double slope_margin = 0.05);

/// Dissipative inequality with Phi in {ylny, inv, clipped_square}.
CheckReport check_dissipative_inequality(const Trajectory& traj, const std::string& phi,
                                         double rel_slack = 1e-8);
const std::vector<std::string>& dissipative_phis();

/// H^{-1/2} identity for F checked by centred differences at record
/// cadence. Further reports: the same residual with dQ/dt evaluated exactly
/// from the mode RHS, and the sign of the right-hand side.
std::vector<CheckReport> check_hminus_identity(const Trajectory& traj, double tol = 1e-3);

/// Weighted Wiener norm bound ||f(t)||_{F^{0,1}_{nu(t)}} <= 2 ||f0||_{F^{0,1}}.
/// Skipped unless ||f0||_{F^{0,1}} <= 0.05 f_inf.
CheckReport check_analyticity(const Trajectory& traj, std::optional<double> theta = std::nullopt);

/// Exponential approach to f_inf: (a) ||f - f_inf||_{L2} non-increasing on
/// the window, (b) fitted decay rate of |c_1| on [t_lo, t_hi] within
/// rel_tol of f_inf.
CheckReport check_decay_to_equilibrium(const Trajectory& traj, double t_lo, double t_hi,
                                       double rel_tol = 0.05);

/// ||f|| L1 * ||F|| L1 >= 4 pi^2, dissipation >= 0 (zero iff constant).
CheckReport check_record_invariants(const Trajectory& traj);

/// Runs the full check suite appropriate for the trajectory.
std::vector<CheckReport> run_all_checks(const Trajectory& traj, const EmpiricalConstants& constants = {});

}  // namespace peskin
