#pragma once

// Spectral representation of real 2*pi-periodic functions and the exact
// Fourier-multiplier operators used throughout: Hilbert transform,
// half-Laplacian, derivative, Fejer smoothing. Independent principal-value
// quadratures of the two singular integrals live here as well, next to the
// norm calculators shared by the diagnostics.
//
// Conventions: the torus is [-pi, pi), c_k = (1/2pi) int f(x) e^{-ikx} dx,
// and only k >= 0 is stored (c_{-k} = conj(c_k)).

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace peskin {

using Complex = std::complex<double>;

/// Band-limited real field stored by its non-negative Fourier coefficients.
///
/// `capacity` fixes the storage (k = 0..capacity). `band_limit` is the
/// declared highest mode that may be nonzero; every coefficient above it is
/// exactly zero. c_0 is kept real.
class SpectralField {
 public:
  SpectralField() : SpectralField(0) {}
  explicit SpectralField(int capacity);

  static SpectralField constant(double value, int capacity);

  int capacity() const { return static_cast<int>(coeffs_.size()) - 1; }
  int band_limit() const { return band_limit_; }
  double mean() const { return coeffs_[0].real(); }

  Complex operator[](int k) const { return coeffs_[static_cast<size_t>(k)]; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  /// Sets c_k; raises the band limit when k exceeds it. The imaginary part of
  /// c_0 is dropped.
  void set(int k, Complex value);

  /// Declares a new band limit and zeroes every coefficient above it.
  void truncate(int band_limit);

  /// Zeroes rounding residue above the band limit and in Im c_0.
  void enforce_invariants();

  /// Same coefficients stored with a different capacity. Shrinking below the
  /// band limit truncates.
  SpectralField with_capacity(int capacity) const;

  /// Highest k with |c_k| > threshold (0 if none).
  int effective_band_limit(double threshold = 0.0) const;

  /// In-place this += scale * other (capacities must match). The band limit
  /// becomes the max of both.
  void add_scaled(double scale, const SpectralField& other);

  std::vector<Complex>& mutable_coeffs() { return coeffs_; }

 private:
  std::vector<Complex> coeffs_;
  int band_limit_ = 0;
};

/// Uniform samples at x_j = -pi + 2*pi*j/M, j = 0..M-1.
struct GridField {
  std::vector<double> samples;

  GridField() = default;
  explicit GridField(std::vector<double> s) : samples(std::move(s)) {}

  int size() const { return static_cast<int>(samples.size()); }
  double operator[](int j) const { return samples[static_cast<size_t>(j)]; }
  double spacing() const;

  static double node(int j, int M);
  static std::vector<double> nodes(int M);
  static GridField sample(const std::function<double(double)>& fn, int M);

  double min() const;
  double max() const;
  /// (2*pi/M) * sum of samples; spectrally accurate for smooth periodic data.
  double integral() const;
};

/// Discrete Fourier analysis onto modes 0..K. Throws AliasingError when
/// M < 2K+1.
SpectralField analyze(const GridField& g, int K);

/// c_0 + 2 sum_k Re(c_k e^{ikx}) at arbitrary points.
std::vector<double> synthesize(const SpectralField& f, std::span<const double> points);
double synthesize_at(const SpectralField& f, double x);

/// Samples the field on the uniform M-point grid.
GridField to_grid(const SpectralField& f, int M);

SpectralField hilbert(const SpectralField& f);
SpectralField half_laplacian(const SpectralField& f);
SpectralField derivative(const SpectralField& f);
/// Fejer means of order N: multiplier (1 - k/N) for k < N, zero otherwise.
SpectralField fejer(const SpectralField& f, int N);

/// Principal-value quadrature of the cotangent kernel with the singular node
/// omitted. Reduction order over j is fixed, so results are bit-reproducible.
GridField hilbert_oracle_pv(const GridField& g);
/// Quadrature of the 1/(4 sin^2) difference kernel.
GridField half_laplacian_oracle_pv(const GridField& g);

/// (int |g|^p dx)^{1/p} by the periodic trapezoid rule; p = +inf gives the
/// largest |sample|.
double norm_lp(const GridField& g, double p);

/// Integral-normalized homogeneous Sobolev semi-norm
/// (2*pi * sum_{k != 0} |k|^{2s} |c_k|^2)^{1/2}. For s < 0 the mean must be
/// zero (MeanZeroViolation otherwise).
double norm_sobolev(const SpectralField& f, double s);

/// sum_{k != 0} e^{nu |k|} |k|^m |c_k|.
double norm_wiener(const SpectralField& f, int m, double nu);

/// Max-norm residual of (HF)^2 - F^2 + Fbar^2 - 2 H(F HF) on a grid of size
/// at least 4K+1.
double cotlar_residual(const SpectralField& u);

/// Smallest grid size that represents products of two band-K fields without
/// aliasing into modes <= 2K.
inline int product_grid_size(int K) { return 4 * K + 1; }

}  // namespace peskin
