#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "peskin/diagnostics.hpp"
#include "peskin/errors.hpp"
#include "transport_oracle.hpp"

using namespace peskin;
using peskin::testing::transport_oracle;

namespace {

constexpr double kPi = std::numbers::pi;

GridField random_density(int M, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  GridField g;
  for (int j = 0; j < M; ++j) g.samples.push_back(u(rng));
  return g;
}

std::vector<double> probabilities(const GridField& g) {
  const double total = g.integral();
  std::vector<double> p;
  for (double v : g.samples) p.push_back(v * g.spacing() / total);
  return p;
}

// Classical RK4 with a tiny fixed step on a' = -4 b^2, b' = -a b.
std::pair<double, double> two_mode_reference(double a, double b, double t) {
  const int n = 20000;
  const double h = t / n;
  auto fa = [](double, double y) { return -4.0 * y * y; };
  auto fb = [](double x, double y) { return -x * y; };
  for (int i = 0; i < n; ++i) {
    const double ka1 = fa(a, b), kb1 = fb(a, b);
    const double ka2 = fa(a + 0.5 * h * ka1, b + 0.5 * h * kb1), kb2 = fb(a + 0.5 * h * ka1, b + 0.5 * h * kb1);
    const double ka3 = fa(a + 0.5 * h * ka2, b + 0.5 * h * kb2), kb3 = fb(a + 0.5 * h * ka2, b + 0.5 * h * kb2);
    const double ka4 = fa(a + h * ka3, b + h * kb3), kb4 = fb(a + h * ka3, b + h * kb3);
    a += h / 6 * (ka1 + 2 * ka2 + 2 * ka3 + ka4);
    b += h / 6 * (kb1 + 2 * kb2 + 2 * kb3 + kb4);
  }
  return {a, b};
}

RunConfig preset_run(const std::string& preset, std::map<std::string, double> params, double t_end,
                     double record_dt, int capacity = 16) {
  RunConfig c;
  c.initial.preset = preset;
  c.initial.params = std::move(params);
  c.capacity = capacity;
  c.t_end = t_end;
  c.record_dt = record_dt;
  c.cfl = 0.25;
  return c;
}

}  // namespace

TEST(ClosedForm, MatchesIndependentIntegrator) {
  for (double t : {0.1, 1.0, 3.0}) {
    const auto [a, b] = two_mode_closed_form(1.0, 0.3, t);
    const auto [ra, rb] = two_mode_reference(1.0, 0.3, t);
    EXPECT_NEAR(a, ra, 1e-10);
    EXPECT_NEAR(b, rb, 1e-10);
  }
}

TEST(ClosedForm, FirstIntegralAndLimits) {
  for (double t : {0.0, 0.5, 2.0, 50.0}) {
    const auto [a, b] = two_mode_closed_form(1.0, 0.3, t);
    EXPECT_NEAR(a * a - 4 * b * b, 0.64, 1e-12);
  }
  EXPECT_NEAR(two_mode_closed_form(1.0, 0.3, 60.0).first, 0.8, 1e-12);
  EXPECT_EQ(two_mode_closed_form(1.7, 0.0, 4.0).first, 1.7);
  EXPECT_THROW(two_mode_closed_form(1.0, 0.5, 1.0), HypothesisViolation);
}

TEST(LowerBound, ConstantDataStaysAbove) {
  EXPECT_EQ(min_lower_bound(2 * kPi, 0.0), 0.0);
  double prev = 0.0;
  for (double t : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double b = min_lower_bound(2 * kPi, t);
    EXPECT_LT(b, 1.0);
    EXPECT_GT(b, prev);
    prev = b;
  }
  // t -> infinity: 8 / (2 pi e).
  EXPECT_NEAR(min_lower_bound(2 * kPi, 1e4), 8.0 / (2 * kPi * std::exp(1.0)), 1e-10);
}

TEST(AnalyticityRadius, ConservativeAndThetaForms) {
  EXPECT_EQ(analyticity_radius(0.8, 0.0), 0.0);
  EXPECT_NEAR(analyticity_radius(0.8, 1.0), 0.5 * std::log((1 + std::exp(1.6)) / 2), 1e-15);
  EXPECT_NEAR(analyticity_radius(0.8, 1.0, 0.25), 0.5 * std::log(0.25 + 0.75 * std::exp(1.6)), 1e-15);
  // Large t: f_inf t - ln 2 / 2 without overflow.
  EXPECT_NEAR(analyticity_radius(1.0, 1000.0), 1000.0 - 0.5 * std::log(2.0), 1e-9);
}

TEST(Wasserstein, EqualInputsGiveZero) {
  std::mt19937_64 rng(1);
  const GridField g = random_density(64, rng);
  EXPECT_EQ(wasserstein1_circle(g, g), 0.0);
}

TEST(Wasserstein, MatchesTransportOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    GridField a = random_density(64, rng);
    GridField b = random_density(64, rng);
    const double scale = a.integral() / b.integral();
    for (double& v : b.samples) v *= scale;
    const double oracle = transport_oracle(probabilities(a), probabilities(b));
    EXPECT_NEAR(wasserstein1_circle(a, b), oracle, 1e-8);
  }
}

TEST(Wasserstein, RotatedBump) {
  const int M = 2048;
  const GridField mu = GridField::sample([](double x) { return std::exp(40.0 * (std::cos(x) - 1.0)); }, M);
  const GridField nu = GridField::sample([](double x) { return std::exp(40.0 * (std::cos(x - 0.3) - 1.0)); }, M);
  EXPECT_NEAR(wasserstein1_circle(mu, nu), 0.3, 1e-8);
}

TEST(Wasserstein, MetricProperties) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const GridField a = random_density(48, rng);
    const GridField b = random_density(48, rng);
    const GridField c = random_density(48, rng);
    const double ab = wasserstein1_circle_unchecked(a, b);
    const double ba = wasserstein1_circle_unchecked(b, a);
    const double bc = wasserstein1_circle_unchecked(b, c);
    const double ac = wasserstein1_circle_unchecked(a, c);
    EXPECT_NEAR(ab, ba, 1e-15);
    EXPECT_LE(ac, ab + bc + 1e-10);
    EXPECT_GT(ab, 0.0);
  }
}

TEST(Wasserstein, MassMismatchIsAnInputError) {
  GridField a(std::vector<double>(16, 1.0));
  GridField b(std::vector<double>(16, 1.1));
  EXPECT_THROW(wasserstein1_circle(a, b), InputError);
  EXPECT_NO_THROW(wasserstein1_circle_unchecked(a, b));
}

TEST(Holder, ConstantAndSubsampleStability) {
  EXPECT_EQ(holder_seminorm(GridField(std::vector<double>(64, 3.0)), 0.1), 0.0);
  const GridField g = GridField::sample([](double x) { return std::cos(x); }, 1024);
  const double coarse = holder_seminorm(g, 0.1, 256);
  const double fine = holder_seminorm(g, 0.1, 512);
  EXPECT_GT(coarse, 0.0);
  EXPECT_NEAR(coarse / fine, 1.0, 0.02);
}

TEST(Helpers, FitSlopeAndExtrema) {
  EXPECT_NEAR(fit_slope({0, 1, 2, 3}, {1, -1, -3, -5}), -2.0, 1e-15);
  SpectralField f(2);
  f.set(0, 1.0);
  f.set(1, Complex{0.3, 0.1});
  const auto [lo, hi] = refined_extrema(f, 7);
  const double amp = 2 * std::abs(Complex{0.3, 0.1});
  EXPECT_NEAR(lo, 1.0 - amp, 1e-14);
  EXPECT_NEAR(hi, 1.0 + amp, 1e-14);
}

TEST(Record, InternalConsistency) {
  InitialSpec spec;
  spec.preset = "random";
  spec.params = {{"K", 12}, {"seed", 3}, {"amplitude", 0.8}};
  const SpectralField f = spectral_preset(spec, 16);
  const InitialContext ctx = make_initial_context(f, 512, 0.1);
  const DiagRecord r = record(0.0, f, ctx, 0.0);
  EXPECT_GE(r.norm_L1_f * r.norm_L1_F, 4 * kPi * kPi);
  EXPECT_NEAR(r.hhalf_f * r.hhalf_f, r.dissipation, 1e-12);
  EXPECT_NEAR(r.norm_L1_f, 2 * kPi * f.mean(), 1e-12);
  EXPECT_EQ(r.energy_residual, 0.0);
  EXPECT_EQ(r.w1_to_initial, 0.0);
  EXPECT_NEAR(r.wiener01, norm_wiener(f, 0, 0.0), 0.0);
  EXPECT_LE(r.fmin, to_grid(f, 4096).min() + 1e-14);
  EXPECT_GE(r.fmax, to_grid(f, 4096).max() - 1e-14);
  const auto values = record_values(r);
  ASSERT_EQ(values.size(), record_columns().size());
  EXPECT_EQ(record_values(record_from_values(values)), values);
}

TEST(Record, EquilibriumOfSmallCosine) {
  // 2 pi / int dx / (0.8 + 0.02 cos x) = sqrt(0.64 - 0.0004).
  SpectralField f(4);
  f.set(0, 0.8);
  f.set(1, 0.01);
  const InitialContext ctx = make_initial_context(f, 512, 0.1);
  EXPECT_NEAR(ctx.f_inf, std::sqrt(0.6396), 1e-14);
  EXPECT_NEAR(ctx.f_inf, 0.79974996, 1e-8);
}

TEST(Checks, ConstantRunPassesEverything) {
  const Trajectory t = simulate(preset_run("constant", {{"a", 1.0}}, 2.0, 0.1, 8));
  const auto checks = run_all_checks(t);
  for (const auto& c : checks) EXPECT_TRUE(c.passed()) << c.name << " " << c.worst;
  const auto decay = check_decay_to_equilibrium(t, 1.0, 2.0);
  EXPECT_EQ(decay.note, "already at equilibrium");
}

TEST(Checks, TwoModeSuitePasses) {
  const Trajectory t = simulate(preset_run("two_mode", {{"a", 1.0}, {"b", 0.3}}, 2.0, 0.01));
  for (const auto& c : run_all_checks(t)) EXPECT_TRUE(c.passed()) << c.name << " " << c.worst << " " << c.note;
}

TEST(Checks, MonotoneCatchesInjectedIncrease) {
  Trajectory t = simulate(preset_run("two_mode", {{"a", 1.0}, {"b", 0.3}}, 0.5, 0.05));
  EXPECT_TRUE(check_monotone(t, "fmax").passed());
  t.records[5].fmax = t.records[4].fmax + 1e-3;
  EXPECT_FALSE(check_monotone(t, "fmax").passed());
  EXPECT_THROW(check_monotone(t, "bogus"), InputError);
}

TEST(Checks, CoarseRunFailsEnergy) {
  // Records every 0.5 so the step is set by the CFL number alone.
  RunConfig c = preset_run("random", {{"K", 16}, {"seed", 1}, {"amplitude", 0.7}}, 1.0, 0.5);
  c.cfl = 1.9;
  const Trajectory t = simulate(c);
  if (t.termination == Termination::completed) {
    EXPECT_FALSE(check_energy_identity(t).passed()) << check_energy_identity(t).worst;
  }
}

TEST(Checks, InverseDissipativeReproducesEnergy) {
  const Trajectory t = simulate(preset_run("two_mode", {{"a", 1.0}, {"b", 0.4}}, 1.0, 0.01));
  EXPECT_TRUE(check_dissipative_inequality(t, "inv").passed());
  EXPECT_TRUE(check_dissipative_inequality(t, "ylny").passed());
  const auto clipped = check_dissipative_inequality(t, "clipped_square");
  EXPECT_TRUE(clipped.passed());
  EXPECT_THROW(check_dissipative_inequality(t, "cubic"), InputError);
}

TEST(Checks, HminusIdentityAtFineCadence) {
  const Trajectory t = simulate(preset_run("two_mode", {{"a", 1.0}, {"b", 0.3}}, 0.5, 1e-3));
  const auto reps = check_hminus_identity(t);
  ASSERT_EQ(reps.size(), 3u);
  EXPECT_LE(reps[0].worst, 1e-3);
  EXPECT_LE(reps[1].worst, 1e-8);
  EXPECT_TRUE(reps[2].passed());
}

TEST(Checks, AnalyticitySkipsLargeData) {
  const Trajectory t = simulate(preset_run("two_mode", {{"a", 1.0}, {"b", 0.3}}, 0.1, 0.05));
  EXPECT_EQ(check_analyticity(t).status, CheckReport::Status::skipped);
}

TEST(Checks, ExplicitBoundsReportSlope) {
  const Trajectory t = simulate(preset_run("two_mode", {{"a", 1.0}, {"b", 0.45}}, 0.2, 1e-3));
  const auto reps = check_explicit_bounds(t);
  ASSERT_EQ(reps.size(), 3u);
  for (const auto& r : reps) EXPECT_TRUE(r.passed()) << r.name << " " << r.note;
}
