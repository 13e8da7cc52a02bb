#include "peskin/torus_ops.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "peskin/errors.hpp"

namespace peskin {

namespace {

constexpr double kPi = std::numbers::pi;

// e^{-2 pi i n / M} for n = 0..M-1.
std::vector<Complex> roots_of_unity(int M) {
  std::vector<Complex> w(static_cast<size_t>(M));
  for (int n = 0; n < M; ++n) {
    w[static_cast<size_t>(n)] = std::polar(1.0, -2.0 * kPi * n / M);
  }
  return w;
}

// Forward real FFT X_k = sum_j g_j e^{-2 pi i jk/M}, k = 0..M/2. Plans are
// created with FFTW_ESTIMATE (deterministic) and cached per size; execution
// through the new-array interface is thread-safe.
std::vector<Complex> real_fft(const std::vector<double>& g) {
  static std::mutex mutex;
  static std::map<int, fftw_plan> plans;
  const int M = static_cast<int>(g.size());
  double* in = fftw_alloc_real(static_cast<size_t>(M));
  fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(M / 2 + 1));
  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = plans.find(M);
    if (it == plans.end()) {
      it = plans.emplace(M, fftw_plan_dft_r2c_1d(M, in, out, FFTW_ESTIMATE)).first;
    }
    plan = it->second;
  }
  std::copy(g.begin(), g.end(), in);
  fftw_execute_dft_r2c(plan, in, out);
  std::vector<Complex> X(static_cast<size_t>(M / 2 + 1));
  for (size_t k = 0; k < X.size(); ++k) X[k] = Complex{out[k][0], out[k][1]};
  fftw_free(in);
  fftw_free(out);
  return X;
}

constexpr int kDirectDftMaxWork = 4096;

}  // namespace

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(int capacity) {
  if (capacity < 0) throw InputError("SpectralField: negative capacity");
  coeffs_.assign(static_cast<size_t>(capacity) + 1, Complex{0.0, 0.0});
}

SpectralField SpectralField::constant(double value, int capacity) {
  SpectralField f(capacity);
  f.coeffs_[0] = value;
  return f;
}

void SpectralField::set(int k, Complex value) {
  if (k < 0 || k > capacity()) {
    throw InputError("SpectralField::set: mode " + std::to_string(k) + " outside capacity " +
                     std::to_string(capacity()));
  }
  if (k == 0) value = Complex{value.real(), 0.0};
  coeffs_[static_cast<size_t>(k)] = value;
  if (k > band_limit_ && value != Complex{0.0, 0.0}) band_limit_ = k;
}

void SpectralField::truncate(int band_limit) {
  band_limit_ = std::clamp(band_limit, 0, capacity());
  for (int k = band_limit_ + 1; k <= capacity(); ++k) coeffs_[static_cast<size_t>(k)] = 0.0;
}

void SpectralField::enforce_invariants() {
  coeffs_[0] = Complex{coeffs_[0].real(), 0.0};
  truncate(band_limit_);
}

SpectralField SpectralField::with_capacity(int capacity) const {
  SpectralField out(capacity);
  const int n = std::min(capacity, this->capacity());
  for (int k = 0; k <= n; ++k) out.coeffs_[static_cast<size_t>(k)] = coeffs_[static_cast<size_t>(k)];
  out.band_limit_ = std::min(band_limit_, capacity);
  return out;
}

int SpectralField::effective_band_limit(double threshold) const {
  for (int k = capacity(); k > 0; --k) {
    if (std::abs(coeffs_[static_cast<size_t>(k)]) > threshold) return k;
  }
  return 0;
}

void SpectralField::add_scaled(double scale, const SpectralField& other) {
  if (other.capacity() != capacity()) throw InputError("add_scaled: capacity mismatch");
  for (size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += scale * other.coeffs_[k];
  band_limit_ = std::max(band_limit_, other.band_limit_);
}

// ---------------------------------------------------------------------------
// GridField

double GridField::spacing() const { return 2.0 * kPi / size(); }

double GridField::node(int j, int M) { return -kPi + 2.0 * kPi * j / M; }

std::vector<double> GridField::nodes(int M) {
  std::vector<double> x(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) x[static_cast<size_t>(j)] = node(j, M);
  return x;
}

GridField GridField::sample(const std::function<double(double)>& fn, int M) {
  GridField g;
  g.samples.resize(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) g.samples[static_cast<size_t>(j)] = fn(node(j, M));
  return g;
}

double GridField::min() const { return *std::min_element(samples.begin(), samples.end()); }
double GridField::max() const { return *std::max_element(samples.begin(), samples.end()); }

double GridField::integral() const {
  double s = 0.0;
  for (double v : samples) s += v;
  return s * spacing();
}

// ---------------------------------------------------------------------------
// Transforms

SpectralField analyze(const GridField& g, int K) {
  const int M = g.size();
  if (K < 0) throw InputError("analyze: negative band limit");
  if (M < 2 * K + 1) {
    throw AliasingError("analyze: grid of " + std::to_string(M) + " points cannot resolve band limit " +
                        std::to_string(K) + " (need M >= 2K+1)");
  }
  SpectralField f(K);
  auto& c = f.mutable_coeffs();
  if (static_cast<long long>(M) * (K + 1) > kDirectDftMaxWork) {
    const auto X = real_fft(g.samples);
    for (int k = 0; k <= K; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      c[static_cast<size_t>(k)] = sign * X[static_cast<size_t>(k)] / static_cast<double>(M);
    }
    c[0] = Complex{c[0].real(), 0.0};
    f.truncate(K);
    return f;
  }
  const auto w = roots_of_unity(M);
  for (int k = 0; k <= K; ++k) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < M; ++j) {
      const auto idx = static_cast<size_t>((static_cast<long long>(k) * j) % M);
      acc += g.samples[static_cast<size_t>(j)] * w[idx];
    }
    // x_j = -pi + 2 pi j / M contributes the factor e^{i k pi} = (-1)^k.
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    c[static_cast<size_t>(k)] = sign * acc / static_cast<double>(M);
  }
  c[0] = Complex{c[0].real(), 0.0};
  f.truncate(K);
  return f;
}

double synthesize_at(const SpectralField& f, double x) {
  const int K = f.band_limit();
  const Complex step = std::polar(1.0, x);
  Complex z = step;
  double sum = 0.0;
  for (int k = 1; k <= K; ++k) {
    sum += (f[k] * z).real();
    z *= step;
  }
  return f.mean() + 2.0 * sum;
}

std::vector<double> synthesize(const SpectralField& f, std::span<const double> points) {
  std::vector<double> out(points.size());
  for (size_t i = 0; i < points.size(); ++i) out[i] = synthesize_at(f, points[i]);
  return out;
}

GridField to_grid(const SpectralField& f, int M) {
  const int K = f.band_limit();
  const auto w = roots_of_unity(M);
  GridField g;
  g.samples.resize(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) {
      // e^{i k x_j} = (-1)^k conj(w[k j mod M])
      const auto idx = static_cast<size_t>((static_cast<long long>(k) * j) % M);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      sum += sign * (f[k] * std::conj(w[idx])).real();
    }
    g.samples[static_cast<size_t>(j)] = f.mean() + 2.0 * sum;
  }
  return g;
}

namespace {

template <typename Multiplier>
SpectralField apply_multiplier(const SpectralField& f, Multiplier m) {
  SpectralField out(f.capacity());
  auto& c = out.mutable_coeffs();
  for (int k = 0; k <= f.band_limit(); ++k) c[static_cast<size_t>(k)] = m(k) * f[k];
  out.truncate(f.band_limit());
  out.enforce_invariants();
  return out;
}

}  // namespace

SpectralField hilbert(const SpectralField& f) {
  return apply_multiplier(f, [](int k) { return k == 0 ? Complex{0.0, 0.0} : Complex{0.0, -1.0}; });
}

SpectralField half_laplacian(const SpectralField& f) {
  return apply_multiplier(f, [](int k) { return Complex{static_cast<double>(k), 0.0}; });
}

SpectralField derivative(const SpectralField& f) {
  return apply_multiplier(f, [](int k) { return Complex{0.0, static_cast<double>(k)}; });
}

SpectralField fejer(const SpectralField& f, int N) {
  if (N < 1) throw InputError("fejer: order must be >= 1");
  SpectralField out = apply_multiplier(f, [N](int k) {
    return k < N ? Complex{1.0 - static_cast<double>(k) / N, 0.0} : Complex{0.0, 0.0};
  });
  out.truncate(std::min(f.band_limit(), N - 1));
  return out;
}

// ---------------------------------------------------------------------------
// Principal-value quadratures
//
// On an even grid both kernels are summed over the nodes at odd offsets from
// the target (weight 2h). That sub-grid sits symmetrically around the
// singularity at half its own spacing, so the odd singular part cancels in
// pairs and the smooth remainder is integrated by the midpoint rule, which is
// spectrally accurate for inputs band-limited below M/4. Odd M falls back to
// plain puncturing (first-order accurate).

namespace {

struct PvStencil {
  std::vector<int> offsets;  // d in (0, M/2], one per symmetric pair
  double weight = 0.0;       // quadrature weight (1/pi) * step
};

PvStencil pv_stencil(int M) {
  PvStencil s;
  const double h = 2.0 * kPi / M;
  if (M % 2 == 0) {
    for (int d = 1; d <= M / 2; d += 2) s.offsets.push_back(d);
    s.weight = 2.0 * h / kPi;
  } else {
    for (int d = 1; d <= M / 2; ++d) s.offsets.push_back(d);
    s.weight = h / kPi;
  }
  return s;
}

inline size_t wrap(int i, int M) { return static_cast<size_t>(((i % M) + M) % M); }

}  // namespace

GridField hilbert_oracle_pv(const GridField& g) {
  const int M = g.size();
  const auto stencil = pv_stencil(M);
  std::vector<double> kernel;
  kernel.reserve(stencil.offsets.size());
  for (int d : stencil.offsets) {
    // 1/(2 tan(pi d / M)) written as cos/sin so d = M/2 yields exactly 0.
    const double a = kPi * d / M;
    kernel.push_back(0.5 * std::cos(a) / std::sin(a));
  }
  GridField out;
  out.samples.assign(static_cast<size_t>(M), 0.0);
  for (int i = 0; i < M; ++i) {
    double acc = 0.0;
    for (size_t n = 0; n < stencil.offsets.size(); ++n) {
      const int d = stencil.offsets[n];
      if (2 * d == M) continue;  // cot(pi/2) = 0
      // x_i - x_{i-d} = +d h, x_i - x_{i+d} = -d h; the kernel is odd.
      acc += kernel[n] * (g.samples[wrap(i - d, M)] - g.samples[wrap(i + d, M)]);
    }
    out.samples[static_cast<size_t>(i)] = stencil.weight * acc;
  }
  return out;
}

GridField half_laplacian_oracle_pv(const GridField& g) {
  const int M = g.size();
  const auto stencil = pv_stencil(M);
  std::vector<double> kernel;
  kernel.reserve(stencil.offsets.size());
  for (int d : stencil.offsets) {
    const double s = std::sin(kPi * d / M);
    kernel.push_back(1.0 / (4.0 * s * s));
  }
  GridField out;
  out.samples.assign(static_cast<size_t>(M), 0.0);
  for (int i = 0; i < M; ++i) {
    const double gi = g.samples[static_cast<size_t>(i)];
    double acc = 0.0;
    for (size_t n = 0; n < stencil.offsets.size(); ++n) {
      const int d = stencil.offsets[n];
      if (2 * d == M) {
        acc += kernel[n] * (gi - g.samples[wrap(i + d, M)]);
      } else {
        acc += kernel[n] * ((gi - g.samples[wrap(i - d, M)]) + (gi - g.samples[wrap(i + d, M)]));
      }
    }
    out.samples[static_cast<size_t>(i)] = stencil.weight * acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Norms

double norm_lp(const GridField& g, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : g.samples) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 1.0) throw InputError("norm_lp: p must be >= 1");
  double s = 0.0;
  if (p == 1.0) {
    for (double v : g.samples) s += std::abs(v);
    return s * g.spacing();
  }
  if (p == 2.0) {
    for (double v : g.samples) s += v * v;
    return std::sqrt(s * g.spacing());
  }
  for (double v : g.samples) s += std::pow(std::abs(v), p);
  return std::pow(s * g.spacing(), 1.0 / p);
}

double norm_sobolev(const SpectralField& f, double s) {
  if (s < 0.0 && f.mean() != 0.0) {
    throw MeanZeroViolation("norm_sobolev: negative order requires a mean-zero field");
  }
  double sum = 0.0;
  for (int k = 1; k <= f.band_limit(); ++k) {
    sum += std::pow(static_cast<double>(k), 2.0 * s) * 2.0 * std::norm(f[k]);
  }
  return std::sqrt(2.0 * kPi * sum);
}

double norm_wiener(const SpectralField& f, int m, double nu) {
  double sum = 0.0;
  for (int k = 1; k <= f.band_limit(); ++k) {
    sum += 2.0 * std::exp(nu * k) * std::pow(static_cast<double>(k), m) * std::abs(f[k]);
  }
  return sum;
}

double cotlar_residual(const SpectralField& u) {
  const int K = u.band_limit();
  const int M = std::max(product_grid_size(K), 2);
  const GridField F = to_grid(u, M);
  const GridField HF = to_grid(hilbert(u), M);
  GridField prod;
  prod.samples.resize(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) prod.samples[static_cast<size_t>(j)] = F[j] * HF[j];
  // F * HF has band limit 2K, which a (4K+1)-point grid resolves exactly.
  const GridField rhs = to_grid(hilbert(analyze(prod, 2 * K)), M);
  const double fbar = u.mean();
  double worst = 0.0;
  for (int j = 0; j < M; ++j) {
    const double lhs = HF[j] * HF[j] - F[j] * F[j] + fbar * fbar;
    worst = std::max(worst, std::abs(lhs - 2.0 * rhs[j]));
  }
  return worst;
}

}  // namespace peskin
