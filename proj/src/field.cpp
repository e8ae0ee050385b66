#include "dnls/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dnls/fft.hpp"

namespace dnls {
namespace {

constexpr double kZeroMeanRelTol = 1e-12;
constexpr double kZeroMeanAbsFloor = 1e-300;

// storage index i (k = i - n/2) <-> FFTW bin m = k mod n
int fftw_bin(int i, int n) { return (i + n / 2) % n; }

std::vector<Complex> to_fftw_order(const std::vector<Complex>& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  std::vector<Complex> out(n);
  for (int i = 0; i < n; ++i) out[fftw_bin(i, n)] = coeffs[i];
  return out;
}

}  // namespace

TorusGrid make_grid(int n) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("make_grid: n must be even and >= 8");
  TorusGrid g;
  g.n = n;
  g.points.resize(n);
  g.wavenumbers.resize(n);
  for (int j = 0; j < n; ++j) g.points[j] = kTwoPi * j / n;
  for (int i = 0; i < n; ++i) g.wavenumbers[i] = i - n / 2;
  return g;
}

Field Field::from_samples(const TorusGrid& grid, std::vector<Complex> samples) {
  if (static_cast<int>(samples.size()) != grid.n)
    throw std::invalid_argument("Field::from_samples: size mismatch");
  Field f;
  f.grid_ = grid;
  auto spectrum = fft::forward(samples);
  f.coefficients_.resize(grid.n);
  for (int i = 0; i < grid.n; ++i)
    f.coefficients_[i] = spectrum[fftw_bin(i, grid.n)] / static_cast<double>(grid.n);
  f.samples_ = std::move(samples);
  return f;
}

Field Field::from_coefficients(const TorusGrid& grid, std::vector<Complex> coefficients) {
  if (static_cast<int>(coefficients.size()) != grid.n)
    throw std::invalid_argument("Field::from_coefficients: size mismatch");
  Field f;
  f.grid_ = grid;
  f.samples_ = fft::inverse(to_fftw_order(coefficients));
  f.coefficients_ = std::move(coefficients);
  return f;
}

Field Field::from_parts(const TorusGrid& grid, std::vector<Complex> samples,
                        std::vector<Complex> coefficients) {
  if (static_cast<int>(samples.size()) != grid.n ||
      static_cast<int>(coefficients.size()) != grid.n)
    throw std::invalid_argument("Field::from_parts: size mismatch");
  Field f;
  f.grid_ = grid;
  f.samples_ = std::move(samples);
  f.coefficients_ = std::move(coefficients);
  return f;
}

double Field::max_coefficient_abs() const {
  double m = 0;
  for (const auto& c : coefficients_) m = std::max(m, std::abs(c));
  return m;
}

bool Field::is_zero_mean() const {
  const double tol = std::max(kZeroMeanRelTol * max_coefficient_abs(), kZeroMeanAbsFloor);
  return std::abs(coefficient(0)) <= tol;
}

Field derivative(const Field& f) {
  const int n = f.size();
  std::vector<Complex> d(n);
  for (int i = 0; i < n; ++i) {
    const int k = f.grid().wavenumbers[i];
    d[i] = (k == -n / 2) ? Complex(0, 0) : Complex(0, k) * f.coefficients()[i];
  }
  return Field::from_coefficients(f.grid(), std::move(d));
}

Field antiderivative_from_zero(const Field& f) {
  if (!f.is_zero_mean())
    throw std::invalid_argument("antiderivative_from_zero: input has nonzero mean");
  const int n = f.size();
  std::vector<Complex> v(n, Complex(0, 0));
  for (int i = 0; i < n; ++i) {
    const int k = f.grid().wavenumbers[i];
    if (k != 0) v[i] = f.coefficients()[i] / Complex(0, k);
  }
  Field w = Field::from_coefficients(f.grid(), std::move(v));
  // shift so V(0) = 0 exactly, keeping samples and coefficients consistent
  const Complex w0 = w.samples()[0];
  std::vector<Complex> samples = w.samples();
  std::vector<Complex> coeffs = w.coefficients();
  for (auto& s : samples) s -= w0;
  coeffs[f.grid().index_of(0)] -= w0;
  samples[0] = Complex(0, 0);
  return Field::from_parts(f.grid(), std::move(samples), std::move(coeffs));
}

double norm(const Field& f, double q) {
  if (!(q >= 1))
    throw std::invalid_argument("norm: q must be >= 1");
  if (std::isinf(q)) {
    double m = 0;
    for (const auto& s : f.samples()) m = std::max(m, std::abs(s));
    return m;
  }
  double acc = 0;
  for (const auto& s : f.samples()) acc += std::pow(std::abs(s), q);
  return std::pow(acc * f.grid().spacing(), 1.0 / q);
}

Field random_zero_mean(const TorusGrid& grid, std::uint64_t seed, int n_modes, double decay) {
  if (n_modes < 0 || n_modes >= grid.n / 2)
    throw std::invalid_argument("random_zero_mean: need 0 <= n_modes < n/2");
  if (!(decay > 0))
    throw std::invalid_argument("random_zero_mean: decay must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<Complex> c(grid.n, Complex(0, 0));
  for (int k = 1; k <= n_modes; ++k) {
    const double mag = std::pow(static_cast<double>(k), -decay);
    c[grid.index_of(k)] = std::polar(mag, phase(rng));
    c[grid.index_of(-k)] = std::polar(mag, phase(rng));
  }
  return Field::from_coefficients(grid, std::move(c));
}

Field resample(const Field& f, int n_new) {
  const TorusGrid grid = make_grid(n_new);
  std::vector<Complex> c(n_new, Complex(0, 0));
  const int n = f.size();
  for (int i = 0; i < n; ++i) {
    const int k = f.grid().wavenumbers[i];
    if (k >= grid.min_wavenumber() && k <= grid.max_wavenumber())
      c[grid.index_of(k)] = f.coefficients()[i];
  }
  return Field::from_coefficients(grid, std::move(c));
}

Field conjugate(const Field& f) {
  const int n = f.size();
  std::vector<Complex> samples(n), coeffs(n);
  for (int j = 0; j < n; ++j) samples[j] = std::conj(f.samples()[j]);
  // conj maps mode k to -k; the Nyquist bin maps to itself on the grid
  for (int i = 0; i < n; ++i) {
    const int k = f.grid().wavenumbers[i];
    const int src = (k == -n / 2) ? -n / 2 : -k;
    coeffs[i] = std::conj(f.coefficients()[f.grid().index_of(src)]);
  }
  return Field::from_parts(f.grid(), std::move(samples), std::move(coeffs));
}

Field scaled(const Field& f, Complex factor) {
  const int n = f.size();
  std::vector<Complex> samples(n), coeffs(n);
  for (int j = 0; j < n; ++j) samples[j] = factor * f.samples()[j];
  for (int i = 0; i < n; ++i) coeffs[i] = factor * f.coefficients()[i];
  return Field::from_parts(f.grid(), std::move(samples), std::move(coeffs));
}

bool all_finite(const Field& f) {
  for (const auto& s : f.samples())
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) return false;
  for (const auto& c : f.coefficients())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace dnls
