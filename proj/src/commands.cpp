#include "peskin/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "peskin/errors.hpp"
#include "peskin/io.hpp"
#include "peskin/lagrangian.hpp"
#include "peskin/svg.hpp"

namespace peskin {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void prepare_out_dir(const std::string& dir, bool force) {
  if (fs::exists(join(dir, kManifestName)) && !force) {
    throw ConfigError("output directory '" + dir + "' already holds a completed run (use --force)");
  }
  fs::create_directories(dir);
}

bool all_passed(const std::vector<CheckReport>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.passed(); });
}

void print_checks(const std::vector<CheckReport>& checks) { std::cout << checks_summary(checks); }

Manifest new_manifest(const std::string& command, const Config& cfg) {
  Manifest m;
  m.version = kArtifactVersion;
  m.command = command;
  m.started = utc_timestamp();
  m.config_echo = cfg.echo();
  return m;
}

/// Replace or add the checksum entry for `name`.
void refresh_manifest_entry(const std::string& dir, const std::string& name) {
  Manifest m = Manifest::read(dir);
  m.files.erase(std::remove_if(m.files.begin(), m.files.end(), [&](const auto& e) { return e.second == name; }),
                m.files.end());
  m.add_file(dir, name);
  m.write(dir);
}

void write_run_plots(const Trajectory& traj, const std::string& dir, std::vector<std::string>& files) {
  if (traj.records.size() < 2) return;
  Series fbar{"fbar", {}, {}};
  Series fmax{"fmax", {}, {}};
  Series fmin{"fmin", {}, {}};
  for (const auto& r : traj.records) {
    fbar.t.push_back(r.t);
    fbar.value.push_back(r.fbar);
    fmax.t.push_back(r.t);
    fmax.value.push_back(r.fmax);
    fmin.t.push_back(r.t);
    fmin.value.push_back(r.fmin);
  }
  std::vector<Series> series{fbar, fmax, fmin};
  const InitialSpec& init = traj.config.initial;
  const SpectralField& f0 = traj.states.front();
  if (init.kind == InitialSpec::Kind::preset && init.preset == "two_mode" && f0.effective_band_limit() <= 1 &&
      f0.mean() > 2.0 * std::abs(f0[1])) {
    Series exact{"closed form", {}, {}};
    for (const auto& r : traj.records) {
      exact.t.push_back(r.t);
      exact.value.push_back(two_mode_closed_form(f0.mean(), std::abs(f0[1]), r.t).first);
    }
    series.push_back(exact);
  }
  render_svg(series, join(dir, "extrema.svg"), {.title = "mean and extrema of f"});
  files.push_back("extrema.svg");
}

}  // namespace

std::string default_output_root() {
  const char* env = std::getenv(kOutRootEnv);
  return (env != nullptr && *env != '\0') ? env : "runs";
}

std::string resolve_out_dir(const CliCommand& cmd) {
  if (!cmd.out_dir.empty()) return cmd.out_dir;
  std::string name = cmd.subcommand;
  if (!cmd.config_path.empty()) name += "-" + fs::path(cmd.config_path).stem().string();
  return join(default_output_root(), name);
}

Config load_config(const CliCommand& cmd) {
  Config c = cmd.config_path.empty() ? Config{} : Config::parse_file(cmd.config_path);
  for (const auto& o : cmd.overrides) c.apply_override(o);
  return c.resolved();
}

EmpiricalConstants constants_for(const Config& cfg) {
  std::string path = cfg.raw("diagnostics.constants");
  if (path.empty()) path = std::string(PESKIN_SOURCE_DIR) + "/data/calibrated_constants.txt";
  return load_constants(path);
}

Trajectory simulate_into(const Config& cfg, const std::string& dir) {
  const RunConfig rc = run_config_from(cfg);
  Manifest m = new_manifest("simulate", cfg);
  const Trajectory traj = simulate(rc);
  std::vector<std::string> files = {"config.txt", "initial.csv", "records.csv", "states.csv"};
  write_text(join(dir, "config.txt"), cfg.echo());
  write_spectral_csv(join(dir, "initial.csv"), traj.states.front());
  write_records_csv(join(dir, "records.csv"), traj.records);
  write_states_csv(join(dir, "states.csv"), traj);
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
    write_spectral_csv(join(dir, name), traj.snapshots[i].field);
    files.emplace_back(name);
  }
  if (cfg.boolean("output.svg")) write_run_plots(traj, dir, files);
  m.termination = to_string(traj.termination);
  if (!traj.message.empty() && traj.termination != Termination::completed) m.termination += " (" + traj.message + ")";
  m.finished = utc_timestamp();
  for (const auto& f : files) m.add_file(dir, f);
  m.write(dir);
  return traj;
}

Trajectory load_run(const std::string& dir) {
  const Manifest m = Manifest::read(dir);
  m.verify(dir);
  const Config cfg = Config::parse_text(read_text(join(dir, "config.txt")), join(dir, "config.txt")).resolved();
  Trajectory traj;
  traj.config = run_config_from(cfg);
  traj.records = read_records_csv(join(dir, "records.csv"));
  traj.states = read_states_csv(join(dir, "states.csv"), traj.config.capacity);
  if (traj.records.size() != traj.states.size()) throw InputError("records.csv and states.csv disagree in length");
  if (traj.records.empty()) throw InputError("run has no records");
  if (m.termination.rfind("completed", 0) != 0) {
    traj.termination = m.termination.rfind("positivity_failure", 0) == 0 ? Termination::positivity_failure
                                                                         : Termination::step_underflow;
    traj.message = m.termination;
  }
  return traj;
}

std::vector<CheckReport> check_into(const std::string& dir, const EmpiricalConstants& constants) {
  const Trajectory traj = load_run(dir);
  std::vector<CheckReport> checks;
  if (traj.termination != Termination::completed) {
    checks.push_back(CheckReport::make("termination", 1.0, traj.records.back().t, 0.0, traj.message));
  }
  for (auto& c : run_all_checks(traj, constants)) checks.push_back(std::move(c));
  write_checks_csv(join(dir, "checks.csv"), checks);
  write_text(join(dir, "summary.txt"), checks_summary(checks));
  refresh_manifest_entry(dir, "checks.csv");
  refresh_manifest_entry(dir, "summary.txt");
  return checks;
}

// ---------------------------------------------------------------------------
// Oracles

std::vector<CheckReport> oracle_suite(const Config& cfg) {
  std::vector<CheckReport> out;

  // Spectral operators vs principal-value quadrature on a truncated exp(cos x).
  const int K = 32;
  const SpectralField u = analyze(GridField::sample([](double x) { return std::exp(std::cos(x)); }, 1024), K);
  auto pv_error = [&](int M) {
    const GridField g = to_grid(u, M);
    const GridField h_pv = hilbert_oracle_pv(g);
    const GridField l_pv = half_laplacian_oracle_pv(g);
    const GridField h_sp = to_grid(hilbert(u), M);
    const GridField l_sp = to_grid(half_laplacian(u), M);
    double eh = 0.0;
    double el = 0.0;
    for (int j = 0; j < M; ++j) {
      eh = std::max(eh, std::abs(h_pv[j] - h_sp[j]));
      el = std::max(el, std::abs(l_pv[j] - l_sp[j]));
    }
    return std::pair{eh, el};
  };
  const auto [eh, el] = pv_error(8192);
  out.push_back(CheckReport::make("oracle.hilbert_pv", eh, 0.0, cfg.has("tol.oracle_pv") ? cfg.number("tol.oracle_pv") : 1e-6,
                                  "exp(cos x), K = 32, M = 8192"));
  out.push_back(CheckReport::make("oracle.half_laplacian_pv", el, 0.0,
                                  cfg.has("tol.oracle_pv") ? cfg.number("tol.oracle_pv") : 1e-6,
                                  "exp(cos x), K = 32, M = 8192"));

  // Halving M must not improve agreement. exp(cos x) reaches the rounding
  // floor by M = 32, so the table uses a field with geometric spectral decay;
  // errors below the floor tie.
  const SpectralField p =
      analyze(GridField::sample([](double x) { return 1.0 / (1.25 - std::cos(x)); }, 1024), 64);
  std::ostringstream table;
  double prev = 0.0;
  int violations = 0;
  for (int M = 1024; M >= 16; M /= 2) {
    const GridField g = to_grid(p, M);
    const GridField h_pv = hilbert_oracle_pv(g);
    const GridField l_pv = half_laplacian_oracle_pv(g);
    const GridField h_sp = to_grid(hilbert(p), M);
    const GridField l_sp = to_grid(half_laplacian(p), M);
    double e = 0.0;
    for (int j = 0; j < M; ++j) e = std::max({e, std::abs(h_pv[j] - h_sp[j]), std::abs(l_pv[j] - l_sp[j])});
    table << "M=" << M << ":" << e << " ";
    const double floor = 1e-11;
    if (std::max(e, floor) < std::max(prev, floor)) ++violations;
    prev = e;
  }
  out.push_back(CheckReport::make("oracle.pv_convergence", violations, 0.0, 0.0, table.str()));

  // Cotlar identity on random band-limited fields.
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double cotlar = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SpectralField v(16);
    v.set(0, unit(rng));
    for (int k = 1; k <= 16; ++k) v.set(k, Complex{unit(rng), unit(rng)} / static_cast<double>(k));
    cotlar = std::max(cotlar, cotlar_residual(v));
  }
  out.push_back(CheckReport::make("oracle.cotlar", cotlar, 0.0, 1e-12, "20 random fields, K = 16, grid 4K+1"));

  // Mode RHS vs pointwise products on the 4K+1 grid.
  const RunConfig rc = run_config_from(cfg);
  const SpectralField f0 = prepare_initial(rc);
  const int M = product_grid_size(f0.capacity());
  const GridField rhs_grid = rhs_grid_oracle(f0, M);
  const GridField rhs_modes = to_grid(galerkin_rhs(f0), M);
  double rhs_err = 0.0;
  double rhs_scale = 1e-300;
  for (int j = 0; j < M; ++j) {
    rhs_err = std::max(rhs_err, std::abs(rhs_grid[j] - rhs_modes[j]));
    rhs_scale = std::max(rhs_scale, std::abs(rhs_grid[j]));
  }
  out.push_back(CheckReport::make("oracle.rhs_modes_vs_grid", rhs_err / std::max(rhs_scale, 1.0), 0.0, 1e-10,
                                  "preset " + rc.initial.preset));

  // W1: rotated von Mises bump, and the median formula vs a search over shifts.
  const int Mw = 4096;
  const double delta = 0.3;
  const GridField mu = GridField::sample([](double x) { return std::exp(40.0 * (std::cos(x) - 1.0)); }, Mw);
  const GridField nu = GridField::sample([&](double x) { return std::exp(40.0 * (std::cos(x - delta) - 1.0)); }, Mw);
  out.push_back(CheckReport::make("oracle.w1_rotation", std::abs(wasserstein1_circle(mu, nu) - delta), 0.0, 1e-6,
                                  "von Mises bump rotated by 0.3"));
  std::uniform_real_distribution<double> pos(0.05, 1.0);
  double w1_err = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int Mb = 128;
    GridField a;
    GridField b;
    for (int j = 0; j < Mb; ++j) {
      a.samples.push_back(pos(rng));
      b.samples.push_back(pos(rng));
    }
    const double scale = a.integral() / b.integral();
    for (double& v : b.samples) v *= scale;
    const double h = a.spacing();
    std::vector<double> U;
    double acc = 0.0;
    for (int j = 0; j < Mb; ++j) {
      acc += h * (a[j] / a.integral() - b[j] / b.integral());
      U.push_back(acc);
    }
    double best = std::numeric_limits<double>::infinity();
    for (double c : U) {
      double s = 0.0;
      for (double x : U) s += h * std::abs(x - c);
      best = std::min(best, s);
    }
    w1_err = std::max(w1_err, std::abs(best - wasserstein1_circle(a, b)));
  }
  out.push_back(CheckReport::make("oracle.w1_shift_search", w1_err, 0.0, 1e-12, "10 random 128-point pairs"));
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands

int run_simulate(const CliCommand& cmd) {
  const Config cfg = load_config(cmd);
  const std::string dir = resolve_out_dir(cmd);
  prepare_out_dir(dir, cmd.force);
  const Trajectory traj = simulate_into(cfg, dir);
  std::cout << "simulate: " << to_string(traj.termination) << " after " << traj.steps << " steps, "
            << traj.records.size() << " records -> " << dir << "\n";
  if (traj.termination != Termination::completed) {
    std::cerr << "simulate: " << traj.message << "\n";
    return kExitNumerical;
  }
  return kExitPass;
}

int run_check(const CliCommand& cmd) {
  const std::string dir = resolve_out_dir(cmd);
  if (!fs::exists(join(dir, kManifestName))) {
    if (cmd.config_path.empty() && cmd.overrides.empty()) {
      throw InputError("no finished run in '" + dir + "' (pass --config to simulate first)");
    }
    fs::create_directories(dir);
    simulate_into(load_config(cmd), dir);
  }
  const Config cfg = Config::parse_text(read_text(join(dir, "config.txt"))).resolved();
  const auto checks = check_into(dir, constants_for(cfg));
  print_checks(checks);
  return all_passed(checks) ? kExitPass : kExitNumerical;
}

int run_oracle(const CliCommand& cmd) {
  const Config cfg = load_config(cmd);
  const std::string dir = resolve_out_dir(cmd);
  prepare_out_dir(dir, cmd.force);
  const auto checks = oracle_suite(cfg);
  Manifest m = new_manifest("oracle", cfg);
  write_checks_csv(join(dir, "oracle.csv"), checks);
  m.finished = utc_timestamp();
  m.termination = all_passed(checks) ? "completed" : "oracle_mismatch";
  m.add_file(dir, "oracle.csv");
  m.write(dir);
  print_checks(checks);
  return all_passed(checks) ? kExitPass : kExitNumerical;
}

int run_lagrangian(const CliCommand& cmd) {
  const Config cfg = load_config(cmd);
  const LagrangianOptions opts = lagrangian_options_from(cfg);
  const std::string dir = resolve_out_dir(cmd);
  prepare_out_dir(dir, cmd.force);
  const Trajectory traj = simulate_into(cfg, dir);
  if (traj.termination != Termination::completed) {
    std::cerr << "lagrangian: simulation ended early: " << traj.message << "\n";
    return kExitNumerical;
  }
  const LagrangianRun run = lagrangian_suite(traj, opts.particles, opts.substeps);
  Manifest m = Manifest::read(dir);
  m.command = "lagrangian";
  write_string_csv(join(dir, "string_initial.csv"), run.X0);
  m.add_file(dir, "string_initial.csv");
  if (!run.frames.empty()) {
    write_string_csv(join(dir, "string_final.csv"), run.frames.back());
    write_flow_csv(join(dir, "flow.csv"), run.flow);
    m.add_file(dir, "string_final.csv");
    m.add_file(dir, "flow.csv");
  }
  write_checks_csv(join(dir, "lagrangian_checks.csv"), run.checks);
  m.add_file(dir, "lagrangian_checks.csv");
  m.finished = utc_timestamp();
  m.write(dir);
  print_checks(run.checks);
  return all_passed(run.checks) ? kExitPass : kExitNumerical;
}

namespace {

struct SweepPoint {
  std::vector<std::pair<std::string, std::string>> assignments;
};

std::vector<SweepPoint> sweep_points(const Config& cfg) {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& [k, v] : cfg.values()) {
    if (k.rfind("sweep.", 0) == 0) axes.emplace_back(k.substr(6), split(v, ','));
  }
  if (axes.empty()) throw ConfigError("sweep needs at least one 'sweep.<key> = v1, v2, ...' entry");
  std::vector<SweepPoint> points(1);
  for (const auto& [key, values] : axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : points) {
      for (const auto& v : values) {
        SweepPoint q = p;
        q.assignments.emplace_back(key, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <typename Fn>
void parallel_for(size_t n, int workers, Fn fn) {
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < n; i = next++) fn(i);
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int w = 1; w < count; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace

int run_sweep(const CliCommand& cmd) {
  const Config base = load_config(cmd);
  const auto points = sweep_points(base);
  const std::string dir = resolve_out_dir(cmd);
  prepare_out_dir(dir, cmd.force);

  struct Outcome {
    std::string termination;
    int passed = 0;
    int total = 0;
    std::string error;
  };
  std::vector<Outcome> outcomes(points.size());
  parallel_for(points.size(), cmd.workers, [&](size_t i) {
    Config c = base;
    for (const auto& [k, v] : points[i].assignments) c.set(k, v);
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    const std::string sub = join(dir, name);
    try {
      fs::create_directories(sub);
      const Trajectory traj = simulate_into(c, sub);
      outcomes[i].termination = to_string(traj.termination);
      const auto checks = check_into(sub, constants_for(c));
      outcomes[i].total = static_cast<int>(checks.size());
      outcomes[i].passed = static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& r) { return r.passed(); }));
    } catch (const std::exception& e) {
      outcomes[i].termination = "error";
      outcomes[i].error = e.what();
    }
  });

  std::ostringstream csv;
  csv << "run";
  for (const auto& [k, v] : points.front().assignments) csv << "," << k;
  csv << ",termination,checks_passed,checks_total\n";
  bool ok = true;
  for (size_t i = 0; i < points.size(); ++i) {
    csv << i;
    for (const auto& [k, v] : points[i].assignments) csv << "," << v;
    csv << "," << outcomes[i].termination << "," << outcomes[i].passed << "," << outcomes[i].total << "\n";
    if (outcomes[i].termination != "completed" || outcomes[i].passed != outcomes[i].total) ok = false;
    if (!outcomes[i].error.empty()) std::cerr << "sweep run " << i << ": " << outcomes[i].error << "\n";
  }
  Manifest m = new_manifest("sweep", base);
  write_text(join(dir, "sweep.csv"), csv.str());
  m.add_file(dir, "sweep.csv");
  m.finished = utc_timestamp();
  m.termination = ok ? "completed" : "failures";
  m.write(dir);
  std::cout << csv.str();
  return ok ? kExitPass : kExitNumerical;
}

int run_calibrate(const CliCommand& cmd) {
  const Config base = load_config(cmd);
  const std::string dir = resolve_out_dir(cmd);
  prepare_out_dir(dir, cmd.force);

  // Families covering smooth, large-amplitude and nearly degenerate data.
  std::vector<std::vector<std::pair<std::string, std::string>>> linf_runs;
  for (const char* b : {"0.1", "0.2", "0.3", "0.4", "0.45", "0.49"}) {
    linf_runs.push_back({{"initial.preset", "two_mode"}, {"initial.a", "1"}, {"initial.b", b}});
  }
  for (const char* seed : {"1", "2", "3", "4"}) {
    linf_runs.push_back({{"initial.preset", "random"}, {"initial.K", "16"}, {"initial.seed", seed},
                         {"initial.amplitude", "0.95"}});
  }
  for (const char* a : {"0.1", "0.01"}) {
    linf_runs.push_back({{"initial.preset", "cos_power"}, {"initial.a", a}, {"initial.p", "4"}});
  }
  std::vector<std::vector<std::pair<std::string, std::string>>> analytic_runs;
  for (const char* b : {"0.002", "0.005", "0.01", "0.02"}) {
    analytic_runs.push_back({{"initial.preset", "two_mode"}, {"initial.a", "0.8"}, {"initial.b", b}});
  }
  analytic_runs.push_back({{"initial.preset", "single_mode"}, {"initial.a", "0.8"}, {"initial.k", "3"},
                           {"initial.b", "0.01"}});

  std::vector<double> linf(linf_runs.size(), 0.0);
  std::vector<double> analytic(analytic_runs.size(), 0.0);
  std::mutex err_mutex;
  std::string first_error;
  auto configure = [&](const std::vector<std::pair<std::string, std::string>>& a) {
    Config c = Config::defaults();
    for (const auto& [k, v] : a) c.set(k, v);
    c.set("spectral.capacity", "64");
    c.set("output.record_dt", "0.001");
    return c;
  };
  parallel_for(linf_runs.size() + analytic_runs.size(), cmd.workers, [&](size_t i) {
    try {
      if (i < linf_runs.size()) {
        Config c = configure(linf_runs[i]);
        c.set("dynamics.t_end", "1");
        const Trajectory traj = simulate(run_config_from(c));
        const double L1 = traj.records.front().norm_L1_f;
        for (const auto& r : traj.records) {
          if (r.t > 0.0 && r.t <= 1.0 / L1) linf[i] = std::max(linf[i], r.fmax * std::sqrt(r.t / L1));
        }
      } else {
        const size_t j = i - linf_runs.size();
        Config c = configure(analytic_runs[j]);
        c.set("dynamics.t_end", "10");
        c.set("output.record_dt", "0.01");
        const Trajectory traj = simulate(run_config_from(c));
        const InitialContext ctx = make_initial_context(traj.states.front(), traj.config.diag_grid, traj.config.alpha);
        for (size_t r = 0; r < traj.states.size(); ++r) {
          const double nu = analyticity_radius(ctx.f_inf, traj.records[r].t);
          analytic[j] = std::max(analytic[j], norm_wiener(traj.states[r], 0, nu) / ctx.wiener01_f0);
        }
      }
    } catch (const std::exception& e) {
      std::lock_guard lock(err_mutex);
      if (first_error.empty()) first_error = e.what();
    }
  });
  if (!first_error.empty()) throw InputError("calibration run failed: " + first_error);

  const double margin = 1.25;
  EmpiricalConstants ec;
  ec.linf_bound_C = margin * *std::max_element(linf.begin(), linf.end());
  ec.analyticity_C_star = margin * *std::max_element(analytic.begin(), analytic.end());
  std::ostringstream prov;
  prov << "linf_bound_C: 1.25 x max of fmax(t) sqrt(t / ||f0||_1) over t in (0, 1/||f0||_1] for "
       << linf_runs.size() << " runs (two_mode, random K=16, cos_power).\n"
       << "analyticity_C_star: 1.25 x max of ||f(t)||_{F01, nu(t)} / ||f0||_{F01} over t in [0, 10] for "
       << analytic_runs.size() << " small-data runs.\n"
       << "Both are empirical, not derived.";
  const std::string path = join(dir, "calibrated_constants.txt");
  save_constants(ec, path, prov.str());
  Manifest m = new_manifest("calibrate", base);
  m.add_file(dir, "calibrated_constants.txt");
  m.finished = utc_timestamp();
  m.termination = "completed";
  m.write(dir);
  std::cout << read_text(path);
  return kExitPass;
}

int dispatch(const CliCommand& cmd) {
  try {
    if (cmd.subcommand == "simulate") return run_simulate(cmd);
    if (cmd.subcommand == "check") return run_check(cmd);
    if (cmd.subcommand == "oracle") return run_oracle(cmd);
    if (cmd.subcommand == "lagrangian") return run_lagrangian(cmd);
    if (cmd.subcommand == "sweep") return run_sweep(cmd);
    if (cmd.subcommand == "calibrate") return run_calibrate(cmd);
    std::cerr << "unknown subcommand '" << cmd.subcommand << "'\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ChecksumError& e) {
    std::cerr << "checksum error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace peskin
