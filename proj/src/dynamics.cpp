#include "peskin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "peskin/errors.hpp"

namespace peskin {

namespace {

constexpr double kPi = std::numbers::pi;

double param(const InitialSpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

/// ||f||^2_{H^1/2} = 2 pi sum_{k != 0} |k| |c_k|^2, the dissipation rate.
double dissipation_rate(const SpectralField& f) {
  double s = 0.0;
  for (int k = 1; k <= f.band_limit(); ++k) s += 2.0 * k * std::norm(f[k]);
  return 2.0 * kPi * s;
}

/// d/dt of dissipation_rate along the mode system.
double dissipation_rate_derivative(const SpectralField& f, const SpectralField& dfdt) {
  double s = 0.0;
  const int K = std::max(f.band_limit(), dfdt.band_limit());
  for (int k = 1; k <= K; ++k) s += 4.0 * k * (std::conj(f[k]) * dfdt[k]).real();
  return 2.0 * kPi * s;
}

SpectralField combine(const SpectralField& y, double a, const SpectralField& k, bool guard,
                      int band_limit) {
  SpectralField out = y;
  out.add_scaled(a, k);
  if (guard) out.truncate(band_limit);
  out.enforce_invariants();
  return out;
}

}  // namespace

double RunConfig::tolerance(const std::string& name, double fallback) const {
  auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

void RunConfig::validate() const {
  std::ostringstream err;
  if (capacity < 0) err << "capacity must be >= 0; ";
  if (!(t_end > 0.0)) err << "t_end must be > 0; ";
  if (!(cfl > 0.0 && cfl <= 2.0)) err << "cfl must lie in (0, 2]; ";
  if (!(dt_max > 0.0)) err << "dt_max must be > 0; ";
  if (!(record_dt > 0.0)) err << "record_dt must be > 0; ";
  if (!(clip_M > 1.0)) err << "clip_M must be > 1; ";
  if (fejer_N < 0 || effective_fejer_N() > capacity + 1) err << "fejer_N must lie in [1, capacity+1]; ";
  if (!(alpha > 0.0 && alpha < 0.2)) err << "alpha must lie in (0, 1/5); ";
  if (diag_grid < 16) err << "diagnostics grid must be >= 16; ";
  for (double t : snapshot_times) {
    if (t < 0.0 || t > t_end) err << "snapshot time " << t << " outside [0, t_end]; ";
  }
  const std::string msg = err.str();
  if (!msg.empty()) throw ConfigError("invalid run configuration: " + msg);
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::completed:
      return "completed";
    case Termination::positivity_failure:
      return "positivity_failure";
    case Termination::step_underflow:
      return "step_underflow";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Mode system

SpectralField galerkin_rhs(const SpectralField& f) {
  const double c0 = f.mean();
  if (!(c0 > 0.0)) throw InputError("galerkin_rhs: mean must be positive");
  const int K = f.capacity();
  const auto c = f.coeffs();
  SpectralField out(K);
  auto& d = out.mutable_coeffs();
  for (int m = 0; m <= K; ++m) {
    Complex acc = -static_cast<double>(m) * c0 * c[static_cast<size_t>(m)];
    for (int j = 1; j + m <= K; ++j) {
      acc -= 2.0 * (m + 2 * j) * c[static_cast<size_t>(m + j)] * std::conj(c[static_cast<size_t>(j)]);
    }
    d[static_cast<size_t>(m)] = acc;
  }
  d[0] = Complex{d[0].real(), 0.0};
  out.truncate(out.effective_band_limit(0.0));
  return out;
}

GridField rhs_grid_oracle(const SpectralField& f, int M) {
  const int K = f.band_limit();
  if (M < product_grid_size(K)) {
    throw AliasingError("rhs_grid_oracle: need M >= 4K+1 = " + std::to_string(product_grid_size(K)));
  }
  const GridField u = to_grid(f, M);
  const GridField hu = to_grid(hilbert(f), M);
  const GridField du = to_grid(derivative(f), M);
  const GridField lu = to_grid(half_laplacian(f), M);
  GridField out;
  out.samples.resize(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) out.samples[static_cast<size_t>(j)] = hu[j] * du[j] - u[j] * lu[j];
  return out;
}

// ---------------------------------------------------------------------------
// Time stepping

SimState step_rk4(const SimState& s, double dt, bool band_guard) {
  if (!(dt > 0.0)) throw InputError("step_rk4: dt must be positive");
  const SpectralField& y = s.field;
  const int K = y.band_limit();
  // A stage with non-positive mean cannot be a positive field.
  auto rhs = [&](const SpectralField& stage) {
    if (!(stage.mean() > 0.0)) {
      std::ostringstream msg;
      msg << "positivity lost inside an RK stage at t = " << s.t << " (dt " << dt << ")";
      throw PositivityFailure(msg.str());
    }
    return galerkin_rhs(stage);
  };
  const SpectralField k1 = rhs(y);
  const SpectralField y2 = combine(y, 0.5 * dt, k1, band_guard, K);
  const SpectralField k2 = rhs(y2);
  const SpectralField y3 = combine(y, 0.5 * dt, k2, band_guard, K);
  const SpectralField k3 = rhs(y3);
  const SpectralField y4 = combine(y, dt, k3, band_guard, K);
  const SpectralField k4 = rhs(y4);

  SimState next;
  next.field = y;
  next.field.add_scaled(dt / 6.0, k1);
  next.field.add_scaled(dt / 3.0, k2);
  next.field.add_scaled(dt / 3.0, k3);
  next.field.add_scaled(dt / 6.0, k4);
  if (band_guard) next.field.truncate(K);
  next.field.enforce_invariants();
  next.t = s.t + dt;
  next.step_count = s.step_count + 1;
  next.dt_last = dt;

  const GridField check = to_grid(next.field, positivity_grid_size(next.field));
  if (!(check.min() > 0.0)) {
    std::ostringstream msg;
    msg << "positivity lost at t = " << next.t << " (grid min " << check.min() << ", dt " << dt << ")";
    throw PositivityFailure(msg.str());
  }
  return next;
}

double adaptive_dt(const SimState& s, double cfl, double dt_max) {
  if (!(cfl > 0.0 && cfl <= 2.0)) throw InputError("adaptive_dt: cfl must lie in (0, 2]");
  const int K = s.field.capacity();
  const double f_max = to_grid(s.field, positivity_grid_size(s.field)).max();
  constexpr double kGuard = 1e-12;
  const double dt = std::min(dt_max, cfl / (K * f_max + kGuard));
  if (dt < kDtFloor) throw StepUnderflow("adaptive_dt: dt below floor 1e-12");
  return dt;
}

// ---------------------------------------------------------------------------
// Initial data

bool preset_is_spectral(const std::string& name) {
  return name == "constant" || name == "two_mode" || name == "single_mode" || name == "random";
}

SpectralField spectral_preset(const InitialSpec& spec, int capacity) {
  if (spec.kind == InitialSpec::Kind::coefficients) {
    const int K = static_cast<int>(spec.coefficients.size()) - 1;
    if (K < 0) throw ConfigError("initial.coefficients is empty");
    if (K > capacity) throw ConfigError("initial.coefficients exceeds the spectral capacity");
    SpectralField f(capacity);
    for (int k = 0; k <= K; ++k) f.set(k, spec.coefficients[static_cast<size_t>(k)]);
    return f;
  }
  const std::string& name = spec.preset;
  SpectralField f(capacity);
  if (name == "constant") {
    f.set(0, param(spec, "a", 1.0));
  } else if (name == "two_mode") {
    if (capacity < 1) throw ConfigError("two_mode needs capacity >= 1");
    f.set(0, param(spec, "a", 1.0));
    f.set(1, param(spec, "b", 0.3));
  } else if (name == "single_mode") {
    const int k = static_cast<int>(param(spec, "k", 3.0));
    if (k < 1 || k > capacity) throw ConfigError("single_mode: k outside [1, capacity]");
    f.set(0, param(spec, "a", 1.0));
    f.set(k, param(spec, "b", 0.05));
  } else if (name == "random") {
    const int K = static_cast<int>(param(spec, "K", 16.0));
    const auto seed = static_cast<unsigned long long>(param(spec, "seed", 1.0));
    const double amplitude = param(spec, "amplitude", 0.7);
    if (K < 1 || K > capacity) throw ConfigError("random: K outside [1, capacity]");
    if (!(amplitude >= 0.0 && amplitude < 1.0)) throw ConfigError("random: amplitude must lie in [0, 1)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Complex> c(static_cast<size_t>(K) + 1);
    double total = 0.0;
    for (int k = 1; k <= K; ++k) {
      const double r = (0.2 + unit(rng)) / k;
      const double phase = 2.0 * kPi * unit(rng);
      c[static_cast<size_t>(k)] = std::polar(r, phase);
      total += 2.0 * r;
    }
    // sum_k 2|c_k| = amplitude keeps f >= 1 - amplitude.
    f.set(0, 1.0);
    for (int k = 1; k <= K; ++k) f.set(k, c[static_cast<size_t>(k)] * (amplitude / total));
  } else {
    throw ConfigError("unknown spectral preset '" + name + "'");
  }
  return f;
}

GridField grid_preset(const InitialSpec& spec, int M) {
  const std::string& name = spec.preset;
  if (preset_is_spectral(name)) {
    const int cap = std::max(1, (M - 1) / 2);
    return to_grid(spectral_preset(spec, std::min(cap, 64)), M);
  }
  if (name == "cos_power") {
    const double a = param(spec, "a", 0.1);
    const double p = param(spec, "p", 4.0);
    return GridField::sample([=](double x) { return a + std::pow(std::cos(x), p); }, M);
  }
  if (name == "step") {
    const double lo = param(spec, "low", 0.1);
    const double hi = param(spec, "high", 1.0);
    return GridField::sample([=](double x) { return x < 0.0 ? lo : hi; }, M);
  }
  throw ConfigError("unknown preset '" + name + "'");
}

SpectralField prepare_from_grid(const GridField& raw, const RunConfig& cfg) {
  for (double v : raw.samples) {
    if (!std::isfinite(v)) throw InputError("initial samples contain non-finite values");
  }
  GridField clipped = raw;
  const double lo = 1.0 / cfg.clip_M;
  const double hi = cfg.clip_M;
  for (double& v : clipped.samples) v = std::clamp(v, lo, hi);
  const SpectralField coarse = analyze(clipped, cfg.capacity);
  return fejer(coarse, cfg.effective_fejer_N());
}

SpectralField prepare_initial(const RunConfig& cfg) {
  const InitialSpec& spec = cfg.initial;
  const int fine = std::max(16 * (cfg.capacity + 1), 1024);
  if (spec.kind == InitialSpec::Kind::grid_file) return prepare_from_grid(spec.grid, cfg);
  if (spec.kind == InitialSpec::Kind::preset && !preset_is_spectral(spec.preset)) {
    return prepare_from_grid(grid_preset(spec, fine), cfg);
  }
  SpectralField f = spectral_preset(spec, cfg.capacity);
  const GridField g = to_grid(f, fine);
  if (g.min() >= 1.0 / cfg.clip_M && g.max() <= cfg.clip_M) return f;
  return prepare_from_grid(g, cfg);
}

// ---------------------------------------------------------------------------
// Driver

Trajectory simulate(const RunConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  traj.config = cfg;

  SimState state;
  state.field = prepare_initial(cfg);
  const InitialContext ctx = make_initial_context(state.field, cfg.diag_grid, cfg.alpha);

  // Event times: records at multiples of record_dt (plus t_end), snapshots.
  std::set<double> record_times;
  const auto n_records = static_cast<long>(std::floor(cfg.t_end / cfg.record_dt + 1e-9));
  for (long n = 1; n <= n_records; ++n) record_times.insert(static_cast<double>(n) * cfg.record_dt);
  if (record_times.empty() || *record_times.rbegin() < cfg.t_end * (1.0 - 1e-12)) {
    record_times.insert(cfg.t_end);
  }
  std::set<double> snapshot_times(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
  std::set<double> events = record_times;
  events.insert(snapshot_times.begin(), snapshot_times.end());
  events.erase(0.0);

  double dissipation_integral = 0.0;
  traj.records.push_back(record(0.0, state.field, ctx, 0.0));
  traj.states.push_back(state.field);
  if (snapshot_times.count(0.0) != 0) traj.snapshots.push_back({0.0, state.field});

  SpectralField rate = galerkin_rhs(state.field);
  double D0 = dissipation_rate(state.field);
  double dD0 = dissipation_rate_derivative(state.field, rate);

  for (double target : events) {
    while (state.t < target) {
      double dt = 0.0;
      try {
        dt = adaptive_dt(state, cfg.cfl, cfg.dt_max);
      } catch (const StepUnderflow& e) {
        traj.termination = Termination::step_underflow;
        traj.message = e.what();
        traj.steps = state.step_count;
        return traj;
      }
      bool landing = false;
      if (state.t + dt >= target - 1e-13 * std::max(1.0, target)) {
        dt = target - state.t;
        landing = true;
      }
      SimState next;
      bool accepted = false;
      for (int attempt = 0; attempt <= 5; ++attempt) {
        try {
          next = step_rk4(state, dt, cfg.band_guard);
          accepted = true;
          break;
        } catch (const PositivityFailure& e) {
          traj.message = e.what();
          dt *= 0.5;
          landing = false;
          if (dt < kDtFloor) break;
        }
      }
      if (!accepted) {
        traj.termination = Termination::positivity_failure;
        traj.steps = state.step_count;
        return traj;
      }
      if (landing) next.t = target;

      // Corrected trapezoid: h/2 (D0 + D1) + h^2/12 (D0' - D1').
      const SpectralField rate1 = galerkin_rhs(next.field);
      const double D1 = dissipation_rate(next.field);
      const double dD1 = dissipation_rate_derivative(next.field, rate1);
      const double h = next.t - state.t;
      dissipation_integral += 0.5 * h * (D0 + D1) + h * h / 12.0 * (dD0 - dD1);
      D0 = D1;
      dD0 = dD1;
      state = std::move(next);
    }
    if (record_times.count(target) != 0) {
      traj.records.push_back(record(state.t, state.field, ctx, dissipation_integral));
      traj.states.push_back(state.field);
    }
    if (snapshot_times.count(target) != 0) traj.snapshots.push_back({state.t, state.field});
  }
  traj.steps = state.step_count;
  traj.message.clear();
  return traj;
}

}  // namespace peskin
