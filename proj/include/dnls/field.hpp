#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace dnls {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform collocation grid on [0, 2pi) with the symmetric wavenumber band.
struct TorusGrid {
  int n = 0;                     // even, >= 8
  std::vector<double> points;    // x_j = 2 pi j / n
  std::vector<int> wavenumbers;  // -n/2 .. n/2-1, increasing

  double spacing() const { return kTwoPi / n; }
  int min_wavenumber() const { return -n / 2; }
  int max_wavenumber() const { return n / 2 - 1; }
  // position of wavenumber k in coefficient arrays
  int index_of(int k) const { return k + n / 2; }
};

TorusGrid make_grid(int n);

// Complex periodic function held as collocation samples together with the
// matching Fourier coefficients, convention
//   u(x) = sum_k c_k e^{ikx},   c_k = (1/2pi) int_0^{2pi} u(x) e^{-ikx} dx.
// Values are immutable once constructed; copies are safe to share across
// threads.
class Field {
 public:
  Field() = default;

  static Field from_samples(const TorusGrid& grid, std::vector<Complex> samples);
  static Field from_coefficients(const TorusGrid& grid, std::vector<Complex> coefficients);
  // For linear operations whose sample/coefficient representations are known
  // to match already; skips the transform.
  static Field from_parts(const TorusGrid& grid, std::vector<Complex> samples,
                          std::vector<Complex> coefficients);

  const TorusGrid& grid() const { return grid_; }
  int size() const { return grid_.n; }
  const std::vector<Complex>& samples() const { return samples_; }
  const std::vector<Complex>& coefficients() const { return coefficients_; }
  Complex coefficient(int k) const { return coefficients_[grid_.index_of(k)]; }

  double max_coefficient_abs() const;
  // |c_0| <= max(1e-12 * max_k |c_k|, 1e-300)
  bool is_zero_mean() const;

 private:
  TorusGrid grid_;
  std::vector<Complex> samples_;
  std::vector<Complex> coefficients_;  // index i holds wavenumber k = i - n/2
};

// Spectral derivative; the Nyquist mode k = -n/2 is zeroed.
Field derivative(const Field& f);

// V(x) = int_0^x f(y) dy for zero-mean f, with V(0) = 0 and V periodic.
Field antiderivative_from_zero(const Field& f);

// L^q norm by uniform rectangle-rule quadrature; q = infinity gives the grid
// sup norm. q must be >= 1.
double norm(const Field& f, double q);

// Zero-mean field with c_k = |k|^{-decay} e^{i theta_k}, theta_k uniform, for
// 0 < |k| <= n_modes; deterministic in seed.
Field random_zero_mean(const TorusGrid& grid, std::uint64_t seed, int n_modes, double decay);

// Spectral interpolation/truncation onto an n_new-point grid.
Field resample(const Field& f, int n_new);

Field conjugate(const Field& f);
Field scaled(const Field& f, Complex factor);
bool all_finite(const Field& f);

}  // namespace dnls
