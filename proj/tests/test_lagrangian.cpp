#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "peskin/errors.hpp"
#include "peskin/lagrangian.hpp"

using namespace peskin;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory two_mode_run(double b, double t_end, double record_dt, int capacity = 16) {
  RunConfig c;
  c.initial.preset = "two_mode";
  c.initial.params = {{"a", 1.0}, {"b", b}};
  c.capacity = capacity;
  c.t_end = t_end;
  c.record_dt = record_dt;
  c.cfl = 0.25;
  return simulate(c);
}

std::vector<double> uniform_seeds(int n) {
  std::vector<double> s;
  for (int i = 0; i < n; ++i) s.push_back(-kPi + 2 * kPi * i / n);
  return s;
}

}  // namespace

TEST(Configuration, IdentityGivesUnitStretch) {
  const GridField f0 = f0_from_configuration(sine_configuration(512, 0.0), 128);
  for (double v : f0.samples) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Configuration, SineStretchAtTheOrigin) {
  // X = s + 0.3 sin s has X' = 1.3 at s = 0, where X = 0.
  const GridField f0 = f0_from_configuration(sine_configuration(4096, 0.3), 256);
  EXPECT_NEAR(f0[128], 1.3, 1e-4);
  GridField F0 = f0;
  for (double& v : F0.samples) v = 1.0 / v;
  EXPECT_NEAR(F0.integral(), 2 * kPi, 1e-4);
}

TEST(Configuration, NonMonotoneRejected) {
  EXPECT_THROW(f0_from_configuration(sine_configuration(256, 1.5), 64), ConfigurationError);
}

TEST(Configuration, RoundTripThroughTheField) {
  SpectralField f(4);
  f.set(0, 1.0);
  f.set(1, 0.3);
  const StringConfig X0 = configuration_from_field(f, 2048);
  EXPECT_NEAR(X0.period_s, 2 * kPi / 0.8, 1e-10);
  EXPECT_NEAR(X0.X.front(), -kPi, 1e-12);
  // With fine labels the centred difference on the output grid dominates,
  // so the error falls ~4x each time that grid is doubled.
  const StringConfig fine = configuration_from_field(f, 16384);
  auto error = [&](int M) {
    const GridField back = f0_from_configuration(fine, M);
    const GridField exact = to_grid(f, M);
    double e = 0.0;
    for (int j = 0; j < M; ++j) e = std::max(e, std::abs(back[j] - exact[j]));
    return e;
  };
  const double e1 = error(128);
  const double e2 = error(256);
  EXPECT_LT(e2, 1e-4);
  EXPECT_NEAR(e1 / e2, 4.0, 0.6);
}

TEST(Flow, ConstantFieldDoesNotMove) {
  RunConfig c;
  c.initial.preset = "constant";
  c.initial.params = {{"a", 1.0}};
  c.capacity = 4;
  c.t_end = 1.0;
  c.record_dt = 0.25;
  const Trajectory t = simulate(c);
  const auto seeds = uniform_seeds(32);
  const FlowMap flow = advect_flow(t, seeds);
  for (const auto& frame : flow.positions) {
    for (size_t i = 0; i < seeds.size(); ++i) EXPECT_EQ(frame[i], seeds[i]);
  }
}

TEST(Flow, InitialVelocityIsMinusHilbert) {
  // f = 1 + 0.6 cos x, Hf = 0.6 sin x, so the particle at pi/2 moves at -0.6.
  const Trajectory t = two_mode_run(0.3, 1e-4, 1e-4);
  const FlowMap flow = advect_flow(t, {kPi / 2});
  EXPECT_NEAR((flow.positions.back()[0] - kPi / 2) / 1e-4, -0.6, 1e-3);
}

TEST(Flow, PeriodicAndOrdered) {
  const Trajectory t = two_mode_run(0.4, 1.0, 0.05);
  std::vector<double> seeds = uniform_seeds(16);
  std::vector<double> shifted;
  for (double s : seeds) shifted.push_back(s + 2 * kPi);
  const FlowMap a = advect_flow(t, seeds);
  const FlowMap b = advect_flow(t, shifted);
  for (size_t k = 0; k < a.times.size(); ++k) {
    for (size_t i = 0; i < seeds.size(); ++i) EXPECT_NEAR(b.positions[k][i] - a.positions[k][i], 2 * kPi, 1e-12);
  }
  EXPECT_TRUE(check_flow_order(a).passed());
}

TEST(Flow, OrderCheckHasTeeth) {
  FlowMap flow;
  flow.seeds = {0.0, 1.0};
  flow.times = {0.0};
  flow.positions = {{1.0, 0.5}};
  EXPECT_FALSE(check_flow_order(flow).passed());
}

TEST(Flow, SubstepRefinementConverges) {
  const Trajectory t = two_mode_run(0.45, 0.5, 0.05);
  const std::vector<double> seeds = {0.3, 1.7};
  const double ref = advect_flow(t, seeds, 64).positions.back()[1];
  const double e1 = std::abs(advect_flow(t, seeds, 1).positions.back()[1] - ref);
  const double e2 = std::abs(advect_flow(t, seeds, 2).positions.back()[1] - ref);
  EXPECT_GT(e1 / e2, 8.0);
}

TEST(Stretch, SecondOrderInLabelSpacing) {
  const Trajectory t = two_mode_run(0.3, 0.5, 0.05);
  auto error = [&](int n) {
    const StringConfig X0 = configuration_from_field(t.states.front(), n);
    const FlowMap flow = advect_flow(t, X0.X, 8);
    return check_stretch_consistency(reconstruct_X(flow, X0), t).worst;
  };
  const double e1 = error(256);
  const double e2 = error(512);
  EXPECT_LT(e2, 1e-3);
  EXPECT_NEAR(e1 / e2, 4.0, 0.5);
}

TEST(Stretch, ReconstructRequiresMatchingSeeds) {
  const Trajectory t = two_mode_run(0.3, 0.1, 0.05);
  const StringConfig X0 = configuration_from_field(t.states.front(), 64);
  const FlowMap flow = advect_flow(t, uniform_seeds(64));
  EXPECT_THROW(reconstruct_X(flow, X0), ConfigurationError);
}

TEST(Invariants, H1SeminormEqualsL1OfStretch) {
  const Trajectory t = two_mode_run(0.35, 1.0, 0.1);
  const StringConfig X0 = configuration_from_field(t.states.front(), 2048);
  const FlowMap flow = advect_flow(t, X0.X);
  const auto frames = reconstruct_X(flow, X0);
  for (size_t k = 0; k < frames.size(); ++k) {
    EXPECT_NEAR(h1_seminorm_squared(frames[k]) / t.records[k].norm_L1_f, 1.0, 1e-5);
  }
  EXPECT_TRUE(check_h1_monotone(frames, flow.times).passed());
  EXPECT_LT(oscillation(frames.back()), oscillation(frames.front()));
}

TEST(Invariants, PushforwardOfUniformSeeds) {
  const Trajectory t = two_mode_run(0.4, 1.0, 0.1);
  const FlowMap flow = advect_flow(t, uniform_seeds(512));
  const auto rep = check_pushforward(flow, t);
  EXPECT_TRUE(rep.passed()) << rep.worst;
  EXPECT_LT(rep.worst, 1e-6);
}

TEST(Invariants, WellStretchedConstant) {
  const Trajectory t = two_mode_run(0.3, 1.0, 0.1);
  EXPECT_NEAR(well_stretched_constant(t, 0.5), t.records[5].fmin, 0.0);
  EXPECT_GE(well_stretched_constant(t, 0.5), min_lower_bound(t.records.front().norm_L1_F, 0.5));
  EXPECT_TRUE(check_well_stretched(t).passed());
}

TEST(Suite, AllChecksPass) {
  const Trajectory t = two_mode_run(0.3, 1.0, 0.05);
  const LagrangianRun run = lagrangian_suite(t, 1024);
  EXPECT_EQ(run.frames.size(), t.records.size());
  for (const auto& c : run.checks) EXPECT_TRUE(c.passed()) << c.name << " " << c.worst << " " << c.note;
}
