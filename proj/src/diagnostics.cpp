#include "peskin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "peskin/errors.hpp"

namespace peskin {

namespace {

constexpr double kPi = std::numbers::pi;

GridField map_grid(const GridField& g, const std::function<double(double)>& fn) {
  GridField out = g;
  for (double& v : out.samples) v = fn(v);
  return out;
}

double integral_of_product(const GridField& a, const GridField& b) {
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s * a.spacing();
}

/// Spectral coefficients of arbitrary (non band-limited) grid data.
SpectralField full_spectrum(const GridField& g) { return analyze(g, (g.size() - 1) / 2); }

/// ||(-Delta)^{-1/4}(G - Gbar)||^2 = 2 pi sum_{k != 0} |G_k|^2 / |k|.
double hminus_half_squared(const SpectralField& G) {
  double s = 0.0;
  for (int k = 1; k <= G.band_limit(); ++k) s += 2.0 * std::norm(G[k]) / k;
  return 2.0 * kPi * s;
}

double refine(const SpectralField& g, double x, bool maximize) {
  const SpectralField d1 = derivative(g);
  const SpectralField d2 = derivative(d1);
  double best = synthesize_at(g, x);
  for (int it = 0; it < 30; ++it) {
    const double s1 = synthesize_at(d1, x);
    const double s2 = synthesize_at(d2, x);
    if (s2 == 0.0) break;
    const double x_new = x - s1 / s2;
    if (!std::isfinite(x_new)) break;
    const double v = synthesize_at(g, x_new);
    if (maximize ? v < best : v > best) break;
    const double change = std::abs(x_new - x);
    best = v;
    x = x_new;
    if (change < 1e-15) break;
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Record plumbing

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "t",           "fbar",         "fmin",        "fmax",         "norm_L1_f",       "norm_L2_f",
      "norm_L4_f",   "norm_L1_F",    "norm_L2_F",   "norm_L4_F",    "hhalf_f",         "hhalf_lnf",
      "h1_sqrtf",    "entropy_FlnF", "dissipation", "energy_residual", "dxf_min",       "dxf_max",
      "wiener01",    "wiener01_nu",  "holder_alpha", "hminus_half_F", "w1_to_initial"};
  return cols;
}

std::vector<double> record_values(const DiagRecord& r) {
  return {r.t,           r.fbar,         r.fmin,         r.fmax,          r.norm_L1_f,       r.norm_L2_f,
          r.norm_L4_f,   r.norm_L1_F,    r.norm_L2_F,    r.norm_L4_F,     r.hhalf_f,         r.hhalf_lnf,
          r.h1_sqrtf,    r.entropy_FlnF, r.dissipation,  r.energy_residual, r.dxf_min,       r.dxf_max,
          r.wiener01,    r.wiener01_nu,  r.holder_alpha, r.hminus_half_F, r.w1_to_initial};
}

DiagRecord record_from_values(const std::vector<double>& v) {
  if (v.size() != record_columns().size()) throw InputError("record row has wrong column count");
  DiagRecord r;
  size_t i = 0;
  for (double* p : {&r.t,           &r.fbar,         &r.fmin,         &r.fmax,          &r.norm_L1_f,
                    &r.norm_L2_f,   &r.norm_L4_f,    &r.norm_L1_F,    &r.norm_L2_F,     &r.norm_L4_F,
                    &r.hhalf_f,     &r.hhalf_lnf,    &r.h1_sqrtf,     &r.entropy_FlnF,  &r.dissipation,
                    &r.energy_residual, &r.dxf_min,  &r.dxf_max,      &r.wiener01,      &r.wiener01_nu,
                    &r.holder_alpha, &r.hminus_half_F, &r.w1_to_initial}) {
    *p = v[i++];
  }
  return r;
}

int diagnostics_grid_size(int requested, int band_limit) {
  int M = std::max(requested, product_grid_size(band_limit));
  if (M % 2 != 0) ++M;
  return M;
}

InitialContext make_initial_context(const SpectralField& f0, int grid, double alpha) {
  InitialContext ctx;
  ctx.grid = diagnostics_grid_size(grid, f0.capacity());
  ctx.alpha = alpha;
  const GridField fg = to_grid(f0, ctx.grid);
  if (!(fg.min() > 0.0)) throw PositivityFailure("initial datum is not positive on the diagnostics grid");
  ctx.F0 = map_grid(fg, [](double v) { return 1.0 / v; });
  ctx.norm_L1_f0 = norm_lp(fg, 1.0);
  ctx.norm_L1_F0 = norm_lp(ctx.F0, 1.0);
  ctx.f_inf = 2.0 * kPi / ctx.norm_L1_F0;
  const auto [lo, hi] = refined_extrema(f0, ctx.grid);
  ctx.norm_inf_f0 = hi;
  ctx.norm_inf_F0 = 1.0 / lo;
  ctx.wiener01_f0 = norm_wiener(f0, 0, 0.0);
  return ctx;
}

DiagRecord record(double t, const SpectralField& f, const InitialContext& ctx, double dissipation_integral) {
  const int M = diagnostics_grid_size(ctx.grid, f.capacity());
  const GridField fg = to_grid(f, M);
  if (!(fg.min() > 0.0)) {
    std::ostringstream msg;
    msg << "record: field not positive at t = " << t;
    throw PositivityFailure(msg.str());
  }
  // Entropy integrand guard; unreachable for positive states.
  const GridField Fg = map_grid(fg, [](double v) { return 1.0 / std::max(v, 1e-300); });

  DiagRecord r;
  r.t = t;
  r.fbar = f.mean();
  std::tie(r.fmin, r.fmax) = refined_extrema(f, M);
  r.norm_L1_f = norm_lp(fg, 1.0);
  r.norm_L2_f = norm_lp(fg, 2.0);
  r.norm_L4_f = norm_lp(fg, 4.0);
  r.norm_L1_F = norm_lp(Fg, 1.0);
  r.norm_L2_F = norm_lp(Fg, 2.0);
  r.norm_L4_F = norm_lp(Fg, 4.0);
  r.hhalf_f = norm_sobolev(f, 0.5);
  r.hhalf_lnf = norm_sobolev(full_spectrum(map_grid(fg, [](double v) { return std::log(v); })), 0.5);
  r.h1_sqrtf = norm_sobolev(full_spectrum(map_grid(fg, [](double v) { return std::sqrt(v); })), 1.0);
  r.entropy_FlnF = map_grid(Fg, [](double v) { return v * std::log(v); }).integral();
  r.dissipation = integral_of_product(fg, to_grid(half_laplacian(f), M));
  const double half_l1_0 = 0.5 * ctx.norm_L1_f0;
  r.energy_residual = (0.5 * r.norm_L1_f + dissipation_integral - half_l1_0) / half_l1_0;
  std::tie(r.dxf_min, r.dxf_max) = refined_extrema(derivative(f), M);
  r.wiener01 = norm_wiener(f, 0, 0.0);
  r.wiener01_nu = norm_wiener(f, 0, analyticity_radius(ctx.f_inf, t));
  r.holder_alpha = holder_seminorm(fg, ctx.alpha, 256);
  r.hminus_half_F = std::sqrt(hminus_half_squared(full_spectrum(Fg)));
  if (ctx.F0.size() != M) throw InputError("record: diagnostics grid changed during the run");
  // Both densities share the total mass ||F0||_1, so normalizing each is the
  // same as dividing by ||F0||_1.
  r.w1_to_initial = wasserstein1_circle_unchecked(ctx.F0, Fg);
  return r;
}

// ---------------------------------------------------------------------------
// Closed forms and helpers

std::pair<double, double> two_mode_closed_form(double a0, double b0, double t) {
  if (!(b0 >= 0.0 && a0 > 2.0 * b0)) {
    throw HypothesisViolation("two_mode_closed_form: requires a0 > 2 b0 >= 0");
  }
  if (b0 == 0.0) return {a0, 0.0};
  const double c = std::sqrt(a0 * a0 - 4.0 * b0 * b0);
  // coth(phi0) = a0 / c  =>  phi0 = atanh(c / a0)
  const double phi0 = std::atanh(c / a0);
  const double a = c / std::tanh(c * t + phi0);
  const double b = std::sqrt(std::max(0.0, (a * a - c * c) / 4.0));
  return {a, b};
}

double min_lower_bound(double norm_L1_F0, double t) {
  if (t <= 0.0) return 0.0;
  const double arg = 4.0 / kPi * t / norm_L1_F0;
  const double coth = 1.0 / std::tanh(arg);
  return 8.0 / norm_L1_F0 * std::exp(-coth);
}

double analyticity_radius(double f_inf, double t, std::optional<double> theta) {
  const double y = 2.0 * f_inf * t;
  if (theta) {
    const double th = *theta;
    // 1/2 ln(th + (1 - th) e^y), evaluated as y/2 + 1/2 ln((1 - th) + th e^{-y}).
    return 0.5 * y + 0.5 * std::log((1.0 - th) + th * std::exp(-y));
  }
  // 1/2 ln((1 + e^y) / 2) = y/2 + 1/2 ln((1 + e^{-y}) / 2)
  return 0.5 * y + 0.5 * std::log(0.5 * (1.0 + std::exp(-y)));
}

double wasserstein1_circle_unchecked(const GridField& mu, const GridField& nu) {
  const int M = mu.size();
  if (nu.size() != M || M < 2) throw InputError("wasserstein1_circle: grids differ");
  const double h = mu.spacing();
  double mass_mu = 0.0;
  double mass_nu = 0.0;
  for (int j = 0; j < M; ++j) {
    if (mu[j] < 0.0 || nu[j] < 0.0) throw InputError("wasserstein1_circle: negative density");
    mass_mu += mu[j];
    mass_nu += nu[j];
  }
  mass_mu *= h;
  mass_nu *= h;
  if (!(mass_mu > 0.0 && mass_nu > 0.0)) throw InputError("wasserstein1_circle: zero mass");
  // U_i = mass flowing across the edge between node i and i+1.
  std::vector<double> U(static_cast<size_t>(M));
  double acc = 0.0;
  for (int j = 0; j < M; ++j) {
    acc += h * (mu[j] / mass_mu - nu[j] / mass_nu);
    U[static_cast<size_t>(j)] = acc;
  }
  std::vector<double> sorted = U;
  std::nth_element(sorted.begin(), sorted.begin() + M / 2, sorted.end());
  const double median = sorted[static_cast<size_t>(M / 2)];
  double w = 0.0;
  for (double u : U) w += std::abs(u - median);
  return w * h;
}

double wasserstein1_circle(const GridField& mu, const GridField& nu) {
  const double a = mu.integral();
  const double b = nu.integral();
  if (std::abs(a - b) > 1e-8 * std::max(std::abs(a), std::abs(b))) {
    throw InputError("wasserstein1_circle: mass mismatch");
  }
  return wasserstein1_circle_unchecked(mu, nu);
}

double holder_seminorm(const GridField& g, double alpha, int max_points) {
  const int M = g.size();
  const int stride = std::max(1, (M + max_points - 1) / max_points);
  std::vector<double> x;
  std::vector<double> v;
  for (int j = 0; j < M; j += stride) {
    x.push_back(GridField::node(j, M));
    v.push_back(g[j]);
  }
  double best = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = i + 1; j < x.size(); ++j) {
      double d = std::abs(x[i] - x[j]);
      d = std::min(d, 2.0 * kPi - d);
      best = std::max(best, std::abs(v[i] - v[j]) / std::pow(d, alpha));
    }
  }
  return best;
}

std::pair<double, double> refined_extrema(const SpectralField& f, int M) {
  const GridField g = to_grid(f, M);
  const auto [lo_it, hi_it] = std::minmax_element(g.samples.begin(), g.samples.end());
  const double x_lo = GridField::node(static_cast<int>(lo_it - g.samples.begin()), M);
  const double x_hi = GridField::node(static_cast<int>(hi_it - g.samples.begin()), M);
  if (f.band_limit() == 0) return {f.mean(), f.mean()};
  return {std::min(*lo_it, refine(f, x_lo, false)), std::max(*hi_it, refine(f, x_hi, true))};
}

std::vector<double> integrate_over_records(const Trajectory& traj,
                                           const std::function<double(const SpectralField&)>& q) {
  const size_t n = traj.states.size();
  std::vector<double> value(n);
  std::vector<double> rate(n);
  for (size_t i = 0; i < n; ++i) {
    const SpectralField& f = traj.states[i];
    value[i] = q(f);
    const SpectralField dfdt = galerkin_rhs(f);
    double scale = 0.0;
    for (int k = 0; k <= dfdt.band_limit(); ++k) scale = std::max(scale, std::abs(dfdt[k]));
    if (scale == 0.0) {
      rate[i] = 0.0;
      continue;
    }
    const double eps = 1e-5 * f.mean() / std::max(scale, f.mean());
    SpectralField plus = f;
    plus.add_scaled(eps, dfdt);
    SpectralField minus = f;
    minus.add_scaled(-eps, dfdt);
    rate[i] = (q(plus) - q(minus)) / (2.0 * eps);
  }
  std::vector<double> out(n, 0.0);
  for (size_t i = 1; i < n; ++i) {
    const double h = traj.records[i].t - traj.records[i - 1].t;
    out[i] = out[i - 1] + 0.5 * h * (value[i - 1] + value[i]) + h * h / 12.0 * (rate[i - 1] - rate[i]);
  }
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0;
  double my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// CheckReport

CheckReport CheckReport::make(std::string name, double worst, double t_worst, double tolerance,
                              std::string note) {
  CheckReport r;
  r.name = std::move(name);
  r.worst = worst;
  r.t_worst = t_worst;
  r.tolerance = tolerance;
  r.note = std::move(note);
  r.status = (worst <= tolerance) ? Status::pass : Status::fail;
  return r;
}

CheckReport CheckReport::skipped(std::string name, std::string note) {
  CheckReport r;
  r.name = std::move(name);
  r.status = Status::skipped;
  r.note = std::move(note);
  return r;
}

const char* to_string(CheckReport::Status s) {
  switch (s) {
    case CheckReport::Status::pass:
      return "pass";
    case CheckReport::Status::fail:
      return "fail";
    case CheckReport::Status::skipped:
      return "skipped";
  }
  return "unknown";
}

namespace {

struct Worst {
  double value = 0.0;
  double t = 0.0;
  void update(double v, double time) {
    if (v > value || !std::isfinite(v)) {
      value = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
      t = time;
    }
  }
};

InitialContext context_of(const Trajectory& traj) {
  return make_initial_context(traj.states.front(), traj.config.diag_grid, traj.config.alpha);
}

}  // namespace

// ---------------------------------------------------------------------------
// Checks

CheckReport check_energy_identity(const Trajectory& traj, double tol) {
  Worst w;
  for (const auto& r : traj.records) w.update(std::abs(r.energy_residual), r.t);
  return CheckReport::make("energy_identity", w.value, w.t, tol);
}

CheckReport check_conservation_F(const Trajectory& traj, double tol) {
  const double F0 = traj.records.front().norm_L1_F;
  Worst w;
  for (const auto& r : traj.records) w.update(std::abs(r.norm_L1_F - F0) / F0, r.t);
  std::ostringstream note;
  note.precision(10);
  note << "f_inf = " << 2.0 * kPi / F0;
  return CheckReport::make("conservation_F", w.value, w.t, tol, note.str());
}

const std::vector<std::string>& monotone_quantities() {
  static const std::vector<std::string> q = {"Lp_f", "Lp_F", "fmax", "fmin", "dxf_max", "dxf_min",
                                             "hhalf_lnf", "h1_sqrtf", "entropy_FlnF"};
  return q;
}

namespace {

// +1: non-increasing, -1: non-decreasing.
std::vector<std::pair<double DiagRecord::*, int>> monotone_members(const std::string& q) {
  if (q == "Lp_f") return {{&DiagRecord::norm_L1_f, 1}, {&DiagRecord::norm_L2_f, 1}, {&DiagRecord::norm_L4_f, 1}};
  if (q == "Lp_F") return {{&DiagRecord::norm_L1_F, 1}, {&DiagRecord::norm_L2_F, 1}, {&DiagRecord::norm_L4_F, 1}};
  if (q == "L1_f") return {{&DiagRecord::norm_L1_f, 1}};
  if (q == "L2_f") return {{&DiagRecord::norm_L2_f, 1}};
  if (q == "L4_f") return {{&DiagRecord::norm_L4_f, 1}};
  if (q == "L1_F") return {{&DiagRecord::norm_L1_F, 1}};
  if (q == "L2_F") return {{&DiagRecord::norm_L2_F, 1}};
  if (q == "L4_F") return {{&DiagRecord::norm_L4_F, 1}};
  if (q == "fmax") return {{&DiagRecord::fmax, 1}};
  if (q == "fmin") return {{&DiagRecord::fmin, -1}};
  if (q == "dxf_max") return {{&DiagRecord::dxf_max, 1}};
  if (q == "dxf_min") return {{&DiagRecord::dxf_min, -1}};
  if (q == "hhalf_lnf") return {{&DiagRecord::hhalf_lnf, 1}};
  if (q == "h1_sqrtf") return {{&DiagRecord::h1_sqrtf, 1}};
  if (q == "entropy_FlnF") return {{&DiagRecord::entropy_FlnF, 1}};
  throw InputError("check_monotone: unknown quantity '" + q + "'");
}

}  // namespace

CheckReport check_monotone(const Trajectory& traj, const std::string& quantity, double rel_slack) {
  Worst w;
  double slack_used = 0.0;
  for (const auto& [member, direction] : monotone_members(quantity)) {
    double scale = 0.0;
    for (const auto& r : traj.records) scale = std::max(scale, std::abs(r.*member));
    const double slack = rel_slack * scale;
    slack_used = std::max(slack_used, slack);
    for (size_t i = 1; i < traj.records.size(); ++i) {
      const double increase = direction * (traj.records[i].*member - traj.records[i - 1].*member);
      // Report the excess over the slack; pass iff excess <= 0.
      w.update(increase - slack, traj.records[i].t);
    }
  }
  CheckReport r = CheckReport::make("monotone_" + quantity, w.value, w.t, 0.0);
  std::ostringstream note;
  note << "slack " << slack_used;
  r.note = note.str();
  return r;
}

CheckReport check_entropy_dissipation(const Trajectory& traj, double rel_slack) {
  const auto integral = integrate_over_records(traj, [&](const SpectralField& f) {
    const int M = diagnostics_grid_size(traj.config.diag_grid, f.capacity());
    const GridField lnf = map_grid(to_grid(f, M), [](double v) { return std::log(v); });
    const double n = norm_sobolev(full_spectrum(lnf), 0.5);
    return n * n;
  });
  const double S0 = traj.records.front().entropy_FlnF;
  double scale = std::abs(S0);
  for (const auto& r : traj.records) scale = std::max(scale, std::abs(r.entropy_FlnF));
  const double slack = rel_slack * std::max(scale, 1.0);
  Worst w;
  for (size_t i = 0; i < traj.records.size(); ++i) {
    const double decrement = S0 - traj.records[i].entropy_FlnF;
    w.update(integral[i] - decrement - slack, traj.records[i].t);
  }
  return CheckReport::make("entropy_dissipation", w.value, w.t, 0.0);
}

std::vector<CheckReport> check_explicit_bounds(const Trajectory& traj, const EmpiricalConstants& constants,
                                               double t_lo, double slope_margin) {
  std::vector<CheckReport> out;
  const double F0 = traj.records.front().norm_L1_F;
  const double f0_l1 = traj.records.front().norm_L1_f;

  Worst lower;
  for (const auto& r : traj.records) lower.update(min_lower_bound(F0, r.t) - r.fmin, r.t);
  out.push_back(CheckReport::make("explicit_bounds.min_lower_bound", lower.value, lower.t, 0.0));

  const double t_hi = 1.0 / f0_l1;
  Worst upper;
  std::vector<double> lt;
  std::vector<double> lf;
  bool any = false;
  for (const auto& r : traj.records) {
    if (r.t <= 0.0 || r.t > t_hi) continue;
    any = true;
    upper.update(r.fmax - constants.linf_bound_C * std::sqrt(f0_l1 / r.t), r.t);
    if (r.t >= t_lo) {
      lt.push_back(std::log(r.t));
      lf.push_back(std::log(r.fmax));
    }
  }
  if (any) {
    out.push_back(CheckReport::make("explicit_bounds.linf_constant", upper.value, upper.t, 0.0,
                                    "C = " + std::to_string(constants.linf_bound_C) + " (" + constants.source + ")"));
  } else {
    out.push_back(CheckReport::skipped("explicit_bounds.linf_constant", "no records in (0, 1/||f0||_1]"));
  }
  if (lt.size() >= 2) {
    const double slope = fit_slope(lt, lf);
    // Violation: how far the slope falls below -1/2 - margin.
    CheckReport r = CheckReport::make("explicit_bounds.linf_slope", (-0.5 - slope_margin) - slope, 0.0, 0.0);
    std::ostringstream note;
    note.precision(6);
    note << "slope = " << slope << " on [" << t_lo << ", " << t_hi << "]";
    r.note = note.str();
    out.push_back(r);
  } else {
    out.push_back(CheckReport::skipped("explicit_bounds.linf_slope", "fewer than two records in the fit window"));
  }
  return out;
}

const std::vector<std::string>& dissipative_phis() {
  static const std::vector<std::string> p = {"ylny", "inv", "clipped_square"};
  return p;
}

CheckReport check_dissipative_inequality(const Trajectory& traj, const std::string& phi,
                                         double rel_slack) {
  const InitialContext ctx = context_of(traj);
  const double a = 1.0 / ctx.norm_inf_f0;
  const double b = ctx.norm_inf_F0;
  std::function<double(double)> Phi;
  std::function<double(double)> dPhi;
  if (phi == "ylny") {
    Phi = [](double y) { return y * std::log(y); };
    dPhi = [](double y) { return std::log(y) + 1.0; };
  } else if (phi == "inv") {
    Phi = [](double y) { return 1.0 / y; };
    dPhi = [](double y) { return -1.0 / (y * y); };
  } else if (phi == "clipped_square") {
    Phi = [a, b](double y) { return y < a ? (y - a) * (y - a) : (y > b ? (y - b) * (y - b) : 0.0); };
    dPhi = [a, b](double y) { return y < a ? 2.0 * (y - a) : (y > b ? 2.0 * (y - b) : 0.0); };
  } else {
    throw InputError("check_dissipative_inequality: unknown Phi '" + phi + "'");
  }
  const int grid = traj.config.diag_grid;
  auto F_of = [grid](const SpectralField& f) {
    const int M = diagnostics_grid_size(grid, f.capacity());
    return std::pair{map_grid(to_grid(f, M), [](double v) { return 1.0 / v; }), M};
  };
  auto phi_integral = [&](const SpectralField& f) {
    const auto [F, M] = F_of(f);
    return map_grid(F, Phi).integral();
  };
  const auto flux = integrate_over_records(traj, [&](const SpectralField& f) {
    const auto [F, M] = F_of(f);
    const GridField lam = to_grid(half_laplacian(f), M);
    double s = 0.0;
    for (int j = 0; j < M; ++j) s += (Phi(F[j]) - F[j] * dPhi(F[j])) * lam[j];
    return s * F.spacing();
  });
  const double rhs = phi_integral(traj.states.front());
  const double slack = rel_slack * std::max(1.0, std::abs(rhs));
  Worst w;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const double lhs = phi_integral(traj.states[i]) + flux[i];
    w.update(lhs - rhs - slack, traj.records[i].t);
  }
  CheckReport r = CheckReport::make("dissipative_inequality." + phi, w.value, w.t, 0.0);
  std::ostringstream note;
  note << "slack " << slack;
  if (phi == "clipped_square") note << "; range [" << a << ", " << b << "]";
  r.note = note.str();
  return r;
}

std::vector<CheckReport> check_hminus_identity(const Trajectory& traj, double tol) {
  const size_t n = traj.states.size();
  const int grid = traj.config.diag_grid;
  std::vector<double> Q(n);
  std::vector<double> dQ_exact(n);
  std::vector<double> flux(n);
  std::vector<double> rhs(n);
  for (size_t i = 0; i < n; ++i) {
    const SpectralField& f = traj.states[i];
    const int M = diagnostics_grid_size(grid, f.capacity());
    const GridField fg = to_grid(f, M);
    const GridField ft = to_grid(galerkin_rhs(f), M);
    GridField F = fg;
    GridField Ft = fg;
    for (int j = 0; j < M; ++j) {
      F.samples[static_cast<size_t>(j)] = 1.0 / fg[j];
      Ft.samples[static_cast<size_t>(j)] = -ft[j] / (fg[j] * fg[j]);
    }
    const SpectralField Fh = full_spectrum(F);
    Q[i] = hminus_half_squared(Fh);
    // dF/dt = -F^2 df/dt with df/dt from the mode RHS.
    const SpectralField Fth = full_spectrum(Ft);
    double d = 0.0;
    for (int k = 1; k <= Fh.capacity(); ++k) d += 4.0 * std::real(std::conj(Fh[k]) * Fth[k]) / k;
    dQ_exact[i] = 2.0 * kPi * d;
    const GridField HF = to_grid(hilbert(Fh), M);
    double s = 0.0;
    for (int j = 0; j < M; ++j) s += fg[j] * HF[j] * HF[j];
    flux[i] = s * fg.spacing();
    const double Fbar = Fh.mean();
    rhs[i] = 2.0 * kPi * Fbar - Fbar * Fbar * fg.integral();
  }
  auto relative = [&](double dQ, size_t i) {
    const double residual = dQ + flux[i] - rhs[i];
    const double scale = std::max(std::abs(flux[i]), std::abs(rhs[i]));
    return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual);
  };
  Worst res;
  Worst exact;
  Worst sign;
  for (size_t i = 0; i < n; ++i) {
    sign.update(rhs[i], traj.records[i].t);
    exact.update(relative(dQ_exact[i], i), traj.records[i].t);
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    const double dt = traj.records[i + 1].t - traj.records[i - 1].t;
    res.update(relative((Q[i + 1] - Q[i - 1]) / dt, i), traj.records[i].t);
  }
  std::vector<CheckReport> out;
  if (n >= 3) {
    out.push_back(CheckReport::make("hminus_identity", res.value, res.t, tol));
  } else {
    out.push_back(CheckReport::skipped("hminus_identity", "fewer than three records"));
  }
  out.push_back(CheckReport::make("hminus_identity.exact_rate", exact.value, exact.t, 1e-8));
  out.push_back(CheckReport::make("hminus_identity.rhs_sign", sign.value, sign.t, 1e-12 * 2.0 * kPi));
  return out;
}

CheckReport check_analyticity(const Trajectory& traj, std::optional<double> theta) {
  const InitialContext ctx = context_of(traj);
  const double w0 = ctx.wiener01_f0;
  if (w0 > 0.05 * ctx.f_inf) {
    return CheckReport::skipped("analyticity", "hypothesis not met: ||f0||_{F01} > 0.05 f_inf");
  }
  Worst w;
  w.value = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const double t = traj.records[i].t;
    const double lhs = norm_wiener(traj.states[i], 0, analyticity_radius(ctx.f_inf, t, theta));
    w.update(lhs - 2.0 * w0, t);
  }
  return CheckReport::make("analyticity", w.value, w.t, 0.0,
                           theta ? "theta supplied" : "conservative nu(t)");
}

CheckReport check_decay_to_equilibrium(const Trajectory& traj, double t_lo, double t_hi, double rel_tol) {
  const InitialContext ctx = context_of(traj);
  const double f_inf = ctx.f_inf;
  std::vector<double> ts;
  std::vector<double> logs;
  double prev = std::numeric_limits<double>::infinity();
  double monotone_excess = 0.0;
  bool at_equilibrium = true;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const double t = traj.records[i].t;
    if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
    const SpectralField& f = traj.states[i];
    SpectralField dev = f;
    dev.set(0, f.mean() - f_inf);
    const double l2 = std::sqrt(2.0 * kPi * (std::norm(dev[0]) + 2.0 * [&] {
      double s = 0.0;
      for (int k = 1; k <= f.band_limit(); ++k) s += std::norm(f[k]);
      return s;
    }()));
    monotone_excess = std::max(monotone_excess, l2 - prev - 1e-12 * std::max(1.0, prev));
    prev = l2;
    const double c1 = f.capacity() >= 1 ? std::abs(f[1]) : 0.0;
    if (c1 > 0.0) {
      at_equilibrium = false;
      ts.push_back(t);
      logs.push_back(std::log(c1));
    }
  }
  if (at_equilibrium) {
    return CheckReport::make("decay_to_equilibrium", monotone_excess, 0.0, 0.0, "already at equilibrium");
  }
  if (ts.size() < 2) return CheckReport::skipped("decay_to_equilibrium", "fewer than two records in window");
  const double rate = -fit_slope(ts, logs);
  const double rel = std::abs(rate - f_inf) / f_inf;
  std::ostringstream note;
  note.precision(8);
  note << "rate = " << rate << ", f_inf = " << f_inf << ", L2 monotone excess = " << monotone_excess;
  const double worst = monotone_excess > 0.0 ? std::numeric_limits<double>::infinity() : rel;
  return CheckReport::make("decay_to_equilibrium", worst, t_hi, rel_tol, note.str());
}

CheckReport check_record_invariants(const Trajectory& traj) {
  Worst w;
  for (const auto& r : traj.records) {
    // Cauchy-Schwarz: ||f||_1 ||F||_1 >= 4 pi^2.
    w.update((4.0 * kPi * kPi - r.norm_L1_f * r.norm_L1_F) / (4.0 * kPi * kPi) - 1e-12, r.t);
    w.update(-r.dissipation - 1e-12, r.t);
    if (r.fmin <= 0.0) w.update(std::numeric_limits<double>::infinity(), r.t);
  }
  return CheckReport::make("record_invariants", w.value, w.t, 0.0);
}

std::vector<CheckReport> run_all_checks(const Trajectory& traj, const EmpiricalConstants& constants) {
  const RunConfig& cfg = traj.config;
  std::vector<CheckReport> out;
  if (traj.records.empty()) return out;
  out.push_back(check_energy_identity(traj, cfg.tolerance("energy", 1e-6)));
  out.push_back(check_conservation_F(traj, cfg.tolerance("conservation_F", 1e-6)));
  out.push_back(check_record_invariants(traj));
  for (const auto& q : monotone_quantities()) out.push_back(check_monotone(traj, q, cfg.tolerance("monotone", 1e-10)));
  out.push_back(check_entropy_dissipation(traj, cfg.tolerance("entropy", 1e-10)));
  for (auto& r : check_explicit_bounds(traj, constants)) out.push_back(std::move(r));
  for (const auto& phi : dissipative_phis()) {
    out.push_back(check_dissipative_inequality(traj, phi, cfg.tolerance("dissipative", 1e-8)));
  }
  for (auto& r : check_hminus_identity(traj, cfg.tolerance("hminus", 1e-3))) out.push_back(std::move(r));
  out.push_back(check_analyticity(traj));
  // The rate claim is asymptotic: only test windows starting past f_inf t = 2.
  const double t_end = traj.records.back().t;
  const double f_inf = 2.0 * kPi / traj.records.front().norm_L1_F;
  if (0.5 * t_end * f_inf < 2.0) {
    out.push_back(CheckReport::skipped("decay_to_equilibrium", "window [t_end/2, t_end] starts before f_inf t = 2"));
  } else {
    out.push_back(check_decay_to_equilibrium(traj, 0.5 * t_end, t_end, cfg.tolerance("decay_rate", 0.05)));
  }
  return out;
}

}  // namespace peskin
