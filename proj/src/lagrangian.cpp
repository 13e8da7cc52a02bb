#include "peskin/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "peskin/errors.hpp"

namespace peskin {

namespace {

constexpr double kPi = std::numbers::pi;

void require_increasing(const std::vector<double>& v, const char* what) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) {
      std::ostringstream msg;
      msg << what << " not strictly increasing at index " << i;
      throw ConfigurationError(msg.str());
    }
  }
}

/// Hilbert transform velocity field: Hf(x) = 2 sum_{k>=1} Im(c_k e^{ikx}).
double hilbert_at(const std::vector<Complex>& c, double x) {
  const Complex step = std::polar(1.0, x);
  Complex z = step;
  double sum = 0.0;
  for (size_t k = 1; k < c.size(); ++k) {
    sum += (c[k] * z).imag();
    z *= step;
  }
  return 2.0 * sum;
}

/// Cubic Hermite blend of two coefficient vectors with slopes d0, d1.
std::vector<Complex> hermite(const SpectralField& c0, const SpectralField& d0, const SpectralField& c1,
                             const SpectralField& d1, double h, double tau) {
  const double t2 = tau * tau;
  const double t3 = t2 * tau;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + tau;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const int K = std::max({c0.band_limit(), c1.band_limit(), d0.band_limit(), d1.band_limit()});
  std::vector<Complex> out(static_cast<size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    out[static_cast<size_t>(k)] = h00 * c0[k] + h10 * h * d0[k] + h01 * c1[k] + h11 * h * d1[k];
  }
  return out;
}

void check_order(const std::vector<double>& x, double t) {
  for (size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      std::ostringstream msg;
      msg << "particles " << i - 1 << " and " << i << " crossed at t = " << t;
      throw FlowCrossingError(msg.str());
    }
  }
  if (x.size() > 1 && !(x.back() < x.front() + 2.0 * kPi)) {
    std::ostringstream msg;
    msg << "first and last particle crossed across the period at t = " << t;
    throw FlowCrossingError(msg.str());
  }
}

size_t nearest_record(const Trajectory& traj, double t) {
  if (traj.records.empty()) throw InputError("trajectory has no records");
  size_t best = 0;
  for (size_t i = 1; i < traj.records.size(); ++i) {
    if (std::abs(traj.records[i].t - t) < std::abs(traj.records[best].t - t)) best = i;
  }
  return best;
}

const std::vector<std::pair<const char*, double (*)(double)>>& test_functions() {
  static const std::vector<std::pair<const char*, double (*)(double)>> phis = {
      {"1", [](double) { return 1.0; }},
      {"cos", [](double x) { return std::cos(x); }},
      {"sin", [](double x) { return std::sin(x); }},
      {"cos2", [](double x) { return std::cos(2.0 * x); }}};
  return phis;
}

/// int phi(x) / f(x) dx on a fine grid.
double weighted_F_integral(const SpectralField& f, double (*phi)(double), int M) {
  const GridField g = to_grid(f, M);
  double s = 0.0;
  for (int j = 0; j < M; ++j) s += phi(GridField::node(j, M)) / g[j];
  return s * g.spacing();
}

}  // namespace

StringConfig sine_configuration(int n, double amplitude) {
  if (n < 2) throw ConfigurationError("sine_configuration: need at least two labels");
  if (std::abs(amplitude) >= 1.0) throw ConfigurationError("sine_configuration: |amplitude| must be < 1");
  StringConfig c;
  c.s = GridField::nodes(n);
  c.X.resize(c.s.size());
  for (size_t i = 0; i < c.s.size(); ++i) c.X[i] = c.s[i] + amplitude * std::sin(c.s[i]);
  return c;
}

GridField f0_from_configuration(const StringConfig& X0, int M) {
  const int n = X0.size();
  if (n < 2 || static_cast<int>(X0.X.size()) != n) throw ConfigurationError("string configuration too small");
  if (M < 3) throw ConfigurationError("f0_from_configuration: grid too small");
  require_increasing(X0.X, "X0");
  require_increasing(X0.s, "labels");
  if (!(X0.X.back() < X0.X.front() + 2.0 * kPi)) throw ConfigurationError("X0 spans more than one period");
  const double P = X0.period_s;

  // Three periods of (X, s) pairs so every target has a bracketing interval.
  std::vector<double> xs;
  std::vector<double> ss;
  for (int m = -1; m <= 1; ++m) {
    for (int i = 0; i < n; ++i) {
      xs.push_back(X0.X[static_cast<size_t>(i)] + 2.0 * kPi * m);
      ss.push_back(X0.s[static_cast<size_t>(i)] + P * m);
    }
  }
  auto G = [&](double x) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t hi = static_cast<size_t>(it - xs.begin());
    const size_t lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ss[lo] + w * (ss[hi] - ss[lo]);
  };
  const double h = 2.0 * kPi / M;
  std::vector<double> Gj(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) Gj[static_cast<size_t>(j)] = G(GridField::node(j, M));
  GridField f;
  f.samples.resize(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    const double next = j + 1 < M ? Gj[static_cast<size_t>(j + 1)] : Gj[0] + P;
    const double prev = j > 0 ? Gj[static_cast<size_t>(j - 1)] : Gj[static_cast<size_t>(M - 1)] - P;
    const double F = (next - prev) / (2.0 * h);
    f.samples[static_cast<size_t>(j)] = 1.0 / F;
  }
  return f;
}

StringConfig configuration_from_field(const SpectralField& f0, int n) {
  if (n < 2) throw ConfigurationError("configuration_from_field: need at least two labels");
  const int M = std::max(4096, 8 * (f0.capacity() + 1));
  const GridField fg = to_grid(f0, M);
  if (!(fg.min() > 0.0)) throw PositivityFailure("configuration_from_field: f0 not positive");
  GridField Fg = fg;
  for (double& v : Fg.samples) v = 1.0 / v;
  SpectralField F = analyze(Fg, M / 2 - 1);
  F.truncate(F.effective_band_limit(1e-18 * F.mean()));
  const double P = 2.0 * kPi * F.mean();

  // G(x) = int_{-pi}^x F - P/2, so that G(-pi) = -P/2 and G(pi) = P/2.
  auto G = [&](double x) {
    double acc = F.mean() * (x + kPi);
    const Complex step = std::polar(1.0, x);
    Complex z = step;
    for (int k = 1; k <= F.band_limit(); ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      acc += 2.0 * (F[k] * (z - sign) / Complex{0.0, static_cast<double>(k)}).real();
      z *= step;
    }
    return acc - 0.5 * P;
  };
  auto dG = [&](double x) { return synthesize_at(F, x); };

  StringConfig c;
  c.period_s = P;
  c.s.resize(static_cast<size_t>(n));
  c.X.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double s = -0.5 * P + P * i / n;
    double lo = -kPi;
    double hi = kPi;
    double x = -kPi + 2.0 * kPi * i / n;
    for (int it = 0; it < 100; ++it) {
      const double r = G(x) - s;
      if (r > 0.0) hi = x; else lo = x;
      if (std::abs(r) < 1e-15 * std::max(1.0, P)) break;
      double next = x - r / dG(x);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) < 1e-16) {
        x = next;
        break;
      }
      x = next;
    }
    c.s[static_cast<size_t>(i)] = s;
    c.X[static_cast<size_t>(i)] = x;
  }
  return c;
}

FlowMap advect_flow(const Trajectory& traj, const std::vector<double>& seeds, int substeps) {
  if (traj.states.empty()) throw InputError("advect_flow: trajectory has no states");
  if (substeps < 1) throw ConfigError("advect_flow: substeps must be >= 1");
  const size_t n_rec = traj.states.size();
  std::vector<SpectralField> slopes;
  slopes.reserve(n_rec);
  for (const auto& f : traj.states) slopes.push_back(galerkin_rhs(f));

  FlowMap flow;
  flow.seeds = seeds;
  flow.times.push_back(traj.records.front().t);
  flow.positions.push_back(seeds);
  std::vector<double> x = seeds;
  std::vector<double> k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size()), tmp(x.size());

  auto velocity = [](const std::vector<Complex>& c, const std::vector<double>& pos, std::vector<double>& out) {
    for (size_t i = 0; i < pos.size(); ++i) out[i] = -hilbert_at(c, pos[i]);
  };

  for (size_t r = 0; r + 1 < n_rec; ++r) {
    const double t0 = traj.records[r].t;
    const double H = traj.records[r + 1].t - t0;
    const double h = H / substeps;
    auto coeffs_at = [&](double tau) {
      return hermite(traj.states[r], slopes[r], traj.states[r + 1], slopes[r + 1], H, tau);
    };
    for (int m = 0; m < substeps; ++m) {
      const double tau0 = static_cast<double>(m) / substeps;
      const double tau_half = (m + 0.5) / substeps;
      const double tau1 = static_cast<double>(m + 1) / substeps;
      const auto c0 = coeffs_at(tau0);
      const auto ch = coeffs_at(tau_half);
      const auto c1 = coeffs_at(tau1);
      velocity(c0, x, k1);
      for (size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
      velocity(ch, tmp, k2);
      for (size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
      velocity(ch, tmp, k3);
      for (size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + h * k3[i];
      velocity(c1, tmp, k4);
      for (size_t i = 0; i < x.size(); ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    check_order(x, traj.records[r + 1].t);
    flow.times.push_back(traj.records[r + 1].t);
    flow.positions.push_back(x);
  }
  return flow;
}

std::vector<StringConfig> reconstruct_X(const FlowMap& flow, const StringConfig& X0) {
  if (flow.seeds.size() != X0.X.size()) throw ConfigurationError("reconstruct_X: seed count mismatch");
  for (size_t i = 0; i < flow.seeds.size(); ++i) {
    if (flow.seeds[i] != X0.X[i]) throw ConfigurationError("reconstruct_X: flow not seeded at X0");
  }
  std::vector<StringConfig> out;
  out.reserve(flow.positions.size());
  for (const auto& pos : flow.positions) {
    StringConfig c = X0;
    c.X = pos;
    out.push_back(std::move(c));
  }
  return out;
}

CheckReport check_stretch_consistency(const std::vector<StringConfig>& X, const Trajectory& traj, double tol) {
  if (X.size() != traj.states.size()) throw InputError("check_stretch_consistency: frame count mismatch");
  double worst = 0.0;
  double t_worst = 0.0;
  for (size_t r = 0; r < X.size(); ++r) {
    const StringConfig& c = X[r];
    const int n = c.size();
    const double ds = c.label_spacing();
    for (int i = 0; i < n; ++i) {
      const double a = c.X[static_cast<size_t>(i)];
      const double b = i + 1 < n ? c.X[static_cast<size_t>(i + 1)] : c.X[0] + 2.0 * kPi;
      const double f_mid = synthesize_at(traj.states[r], 0.5 * (a + b));
      const double err = std::abs((b - a) / ds - f_mid) / f_mid;
      if (err > worst) {
        worst = err;
        t_worst = traj.records[r].t;
      }
    }
  }
  return CheckReport::make("lagrangian.stretch_consistency", worst, t_worst, tol);
}

CheckReport check_pushforward(const FlowMap& flow, const Trajectory& traj, double tol) {
  if (flow.positions.size() != traj.states.size()) throw InputError("check_pushforward: frame count mismatch");
  const size_t n = flow.seeds.size();
  const double dx = 2.0 * kPi / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(flow.seeds[i] - GridField::node(static_cast<int>(i), static_cast<int>(n))) > 1e-12) {
      throw ConfigurationError("check_pushforward: seeds are not a uniform grid");
    }
  }
  const SpectralField& f0 = traj.states.front();
  std::vector<double> F0(n);
  for (size_t i = 0; i < n; ++i) F0[i] = 1.0 / synthesize_at(f0, flow.seeds[i]);
  const int M = std::max(2048, product_grid_size(f0.capacity()) + 1);
  const double mass = weighted_F_integral(f0, test_functions()[0].second, M);
  double worst = 0.0;
  double t_worst = 0.0;
  std::string worst_phi;
  for (size_t r = 0; r < flow.positions.size(); ++r) {
    for (const auto& [name, phi] : test_functions()) {
      const double exact = weighted_F_integral(traj.states[r], phi, M);
      double sum = 0.0;
      for (size_t i = 0; i < n; ++i) sum += phi(flow.positions[r][i]) * F0[i];
      const double err = std::abs(exact - sum * dx) / mass;
      if (err > worst) {
        worst = err;
        t_worst = flow.times[r];
        worst_phi = name;
      }
    }
  }
  return CheckReport::make("lagrangian.pushforward", worst, t_worst, tol, "worst phi = " + worst_phi);
}

CheckReport check_pushforward_labels(const std::vector<StringConfig>& X, const Trajectory& traj, double tol) {
  if (X.size() != traj.states.size()) throw InputError("check_pushforward_labels: frame count mismatch");
  const int M = std::max(2048, product_grid_size(traj.states.front().capacity()) + 1);
  const double mass = weighted_F_integral(traj.states.front(), test_functions()[0].second, M);
  double worst = 0.0;
  double t_worst = 0.0;
  std::string worst_phi;
  for (size_t r = 0; r < X.size(); ++r) {
    for (const auto& [name, phi] : test_functions()) {
      const double exact = weighted_F_integral(traj.states[r], phi, M);
      double sum = 0.0;
      for (double x : X[r].X) sum += phi(x);
      const double err = std::abs(exact - sum * X[r].label_spacing()) / mass;
      if (err > worst) {
        worst = err;
        t_worst = traj.records[r].t;
        worst_phi = name;
      }
    }
  }
  return CheckReport::make("lagrangian.pushforward_labels", worst, t_worst, tol, "worst phi = " + worst_phi);
}

double well_stretched_constant(const Trajectory& traj, double t) {
  const size_t r = nearest_record(traj, t);
  const double lambda = traj.records[r].fmin;
  const double bound = min_lower_bound(traj.records.front().norm_L1_F, traj.records[r].t);
  if (lambda < bound) {
    std::ostringstream msg;
    msg << "well-stretched constant " << lambda << " below the lower bound " << bound << " at t = "
        << traj.records[r].t;
    throw HypothesisViolation(msg.str());
  }
  return lambda;
}

CheckReport check_flow_order(const FlowMap& flow) {
  // Worst violation: the negative of the smallest gap (pass iff every gap > 0).
  double worst = -std::numeric_limits<double>::infinity();
  double t_worst = 0.0;
  for (size_t r = 0; r < flow.positions.size(); ++r) {
    const auto& x = flow.positions[r];
    for (size_t i = 0; i < x.size(); ++i) {
      const double next = i + 1 < x.size() ? x[i + 1] : x[0] + 2.0 * kPi;
      const double v = -(next - x[i]);
      if (v > worst) {
        worst = v;
        t_worst = flow.times[r];
      }
    }
  }
  CheckReport rep = CheckReport::make("lagrangian.flow_order", worst, t_worst, 0.0);
  if (worst >= 0.0) rep.status = CheckReport::Status::fail;
  return rep;
}

double h1_seminorm_squared(const StringConfig& X) {
  const int n = X.size();
  const double ds = X.label_spacing();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = X.X[static_cast<size_t>(i)];
    const double b = i + 1 < n ? X.X[static_cast<size_t>(i + 1)] : X.X[0] + 2.0 * kPi;
    s += (b - a) * (b - a) / ds;
  }
  return s;
}

CheckReport check_h1_monotone(const std::vector<StringConfig>& X, const std::vector<double>& times,
                              double rel_slack) {
  double worst = -std::numeric_limits<double>::infinity();
  double t_worst = 0.0;
  double prev = 0.0;
  for (size_t r = 0; r < X.size(); ++r) {
    const double v = std::sqrt(h1_seminorm_squared(X[r]));
    if (r > 0) {
      const double excess = v - prev - rel_slack * prev;
      if (excess > worst) {
        worst = excess;
        t_worst = times[r];
      }
    }
    prev = v;
  }
  if (X.size() < 2) worst = 0.0;
  return CheckReport::make("lagrangian.h1_monotone", worst, t_worst, 0.0);
}

double oscillation(const StringConfig& X) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const double scale = 2.0 * kPi / X.period_s;
  for (size_t i = 0; i < X.X.size(); ++i) {
    const double d = X.X[i] - scale * X.s[i];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo;
}

CheckReport check_well_stretched(const Trajectory& traj) {
  const double normF0 = traj.records.front().norm_L1_F;
  double worst = -std::numeric_limits<double>::infinity();
  double t_worst = 0.0;
  for (const auto& r : traj.records) {
    const double v = min_lower_bound(normF0, r.t) - r.fmin;
    if (v > worst) {
      worst = v;
      t_worst = r.t;
    }
  }
  return CheckReport::make("lagrangian.well_stretched", worst, t_worst, 0.0);
}

LagrangianRun lagrangian_suite(const Trajectory& traj, int particles, int substeps) {
  LagrangianRun run;
  run.X0 = configuration_from_field(traj.states.front(), particles);
  std::vector<double> times;
  for (const auto& r : traj.records) times.push_back(r.t);
  try {
    run.flow = advect_flow(traj, run.X0.X, substeps);
  } catch (const FlowCrossingError& e) {
    run.checks.push_back(CheckReport::make("lagrangian.flow_order", std::numeric_limits<double>::infinity(), 0.0,
                                           0.0, e.what()));
    return run;
  }
  run.frames = reconstruct_X(run.flow, run.X0);
  run.checks.push_back(check_flow_order(run.flow));
  run.checks.push_back(check_stretch_consistency(run.frames, traj));
  run.checks.push_back(check_pushforward_labels(run.frames, traj));
  const FlowMap uniform = advect_flow(traj, GridField::nodes(particles), substeps);
  run.checks.push_back(check_pushforward(uniform, traj));
  run.checks.push_back(check_h1_monotone(run.frames, times));
  run.checks.push_back(check_well_stretched(traj));
  return run;
}

}  // namespace peskin
