#pragma once

// Eulerian <-> Lagrangian conversion for the straight string: the string
// configuration X(s, t), its particle flow map, and the checks tying both to
// the Eulerian stretch field f.

#include <numbers>
#include <vector>

#include "peskin/diagnostics.hpp"
#include "peskin/dynamics.hpp"
#include "peskin/torus_ops.hpp"

namespace peskin {

/// Labels s (uniform, n points starting at -period_s/2) and positions X.
/// X(s + period_s) = X(s) + 2 pi is implied.
struct StringConfig {
  std::vector<double> s;
  std::vector<double> X;
  double period_s = 2.0 * std::numbers::pi;

  int size() const { return static_cast<int>(s.size()); }
  double label_spacing() const { return period_s / size(); }
};

/// Particle positions Psi_t(seed_i) at each record time. Positions are not
/// wrapped back into [-pi, pi).
struct FlowMap {
  std::vector<double> seeds;
  std::vector<double> times;
  std::vector<std::vector<double>> positions;
};

/// Uniform labels on [-period/2, period/2) with X = s + amplitude sin(s).
StringConfig sine_configuration(int n, double amplitude);

/// Inverts X0 by monotone piecewise-linear interpolation onto the uniform
/// M-point grid, differentiates the inverse by centred differences and
/// returns f0 = 1 / F0. Throws ConfigurationError on non-monotone input.
GridField f0_from_configuration(const StringConfig& X0, int M);

/// The configuration whose stretch field is f0: X0 is the inverse of
/// G0(x) = int_{-pi}^x 1/f0, labelled so that X0(-period/2) = -pi. The label
/// period is ||1/f0||_1.
StringConfig configuration_from_field(const SpectralField& f0, int n);

/// Integrates d Psi / dt = -Hf(Psi, t) through the trajectory with RK4,
/// `substeps` steps per record interval. Coefficients between records come
/// from cubic Hermite interpolation using the exact mode RHS as the slope.
/// Throws FlowCrossingError if adjacent particles swap order.
FlowMap advect_flow(const Trajectory& traj, const std::vector<double>& seeds, int substeps = 4);

/// X(s_i, t) = Psi_t(X0(s_i)) for every flow time. Throws ConfigurationError
/// unless the flow was seeded at X0.X.
std::vector<StringConfig> reconstruct_X(const FlowMap& flow, const StringConfig& X0);

/// Max over frames and intervals of |(X_{i+1} - X_i)/ds - f(x_mid)| / f(x_mid),
/// x_mid the midpoint of the two positions.
CheckReport check_stretch_consistency(const std::vector<StringConfig>& X, const Trajectory& traj,
                                      double tol = 1e-3);

/// For phi in {1, cos x, sin x, cos 2x}: |int phi F(t) - sum_i phi(Psi_t(x_i)) F0(x_i) dx|
/// relative to ||F0||_1. Requires seeds on a uniform grid of [-pi, pi).
CheckReport check_pushforward(const FlowMap& flow, const Trajectory& traj, double tol = 1e-3);

/// Same test for a flow seeded at a string configuration: the label measure
/// pushes forward to F, so int phi F(t) = int phi(X(s, t)) ds.
CheckReport check_pushforward_labels(const std::vector<StringConfig>& X, const Trajectory& traj,
                                     double tol = 1e-3);

/// lambda(t) = fmin(t) at the record nearest t. Throws HypothesisViolation if
/// it falls below the minimum lower bound.
double well_stretched_constant(const Trajectory& traj, double t);

/// Adjacent positions strictly increasing and the span below one period.
CheckReport check_flow_order(const FlowMap& flow);

/// sum (X_{i+1} - X_i)^2 / ds over one label period.
double h1_seminorm_squared(const StringConfig& X);

/// The H^1 semi-norm of X is non-increasing across frames.
CheckReport check_h1_monotone(const std::vector<StringConfig>& X, const std::vector<double>& times,
                              double rel_slack = 1e-9);

/// max - min of X(s) - 2 pi s / period_s.
double oscillation(const StringConfig& X);

/// lambda(t) >= the minimum lower bound at every record.
CheckReport check_well_stretched(const Trajectory& traj);

/// Everything above for one trajectory: the string configuration of f0 with
/// `particles` labels, its flow and frames, plus a second flow seeded on the
/// uniform grid for the Eulerian pushforward test.
struct LagrangianRun {
  StringConfig X0;
  FlowMap flow;
  std::vector<StringConfig> frames;
  std::vector<CheckReport> checks;
};
LagrangianRun lagrangian_suite(const Trajectory& traj, int particles, int substeps = 4);

}  // namespace peskin
