#include "dnls/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace dnls {

Complex pairing_integral(const Field& u) {
  if (!u.is_zero_mean())
    throw std::invalid_argument("pairing_integral: u has nonzero mean");
  double s = 0;
  for (int i = 0; i < u.size(); ++i) {
    const int k = u.grid().wavenumbers[i];
    if (k != 0) s += std::norm(u.coefficients()[i]) / k;
  }
  return Complex(0, kTwoPi * s);
}

double blowup_functional(const Field& u, Complex alpha) {
  return std::imag(alpha * pairing_integral(u));
}

bool check_condition_i(const Field& u0, Complex lambda) {
  return std::real(lambda) * std::imag(pairing_integral(u0)) > 0;
}

std::optional<Complex> choose_alpha(const Field& u0, Complex lambda) {
  if (!check_condition_i(u0, lambda)) return std::nullopt;
  return Complex(std::real(lambda) > 0 ? 1.0 : -1.0, 0.0);
}

double lifespan_bound(const Field& u0, double p, Complex lambda) {
  if (!(p > 1)) throw std::invalid_argument("lifespan_bound: p must be > 1");
  if (std::real(lambda) == 0.0)
    throw std::invalid_argument("lifespan_bound: bound undefined: Re lambda = 0");
  const double I_abs = std::abs(pairing_integral(u0));
  if (I_abs == 0.0) throw std::invalid_argument("lifespan_bound: bound infinite");
  return std::pow(kTwoPi, p) / ((p - 1) * std::abs(std::real(lambda))) *
         std::pow(I_abs, -(p - 1) / 2);
}

Complex total_density(const Field& u) { return kTwoPi * u.coefficient(0); }

double energy_E2(const Field& w) {
  const Field wx = derivative(w);
  double acc = 0;
  for (int j = 0; j < w.size(); ++j) {
    const Complex wj = w.samples()[j];
    const Complex dj = wx.samples()[j];
    acc += std::norm(dj) + 0.5 * std::imag(std::norm(wj) * std::conj(wj) * dj);
  }
  return acc * w.grid().spacing();
}

double holder_majorant(const Field& u, Complex alpha, double p) {
  if (!(p > 1)) throw std::invalid_argument("holder_majorant: p must be > 1");
  const double nrm = norm(u, p + 1);
  return std::pow(kTwoPi, 2 * p / (p + 1)) * std::abs(alpha) * nrm * nrm;
}

std::optional<double> ode_lower_bound(double M0, double t, double p, Complex lambda,
                                      Complex alpha) {
  if (!(M0 > 0)) throw std::invalid_argument("ode_lower_bound: M0 must be positive");
  if (!(p > 1)) throw std::invalid_argument("ode_lower_bound: p must be > 1");
  const double drive = std::real(alpha) * std::real(lambda);
  if (!(drive > 0))
    throw std::invalid_argument("ode_lower_bound: Re(alpha) * Re(lambda) must be positive");
  const double bracket = std::pow(M0, -(p - 1) / 2) -
                         (p - 1) * std::pow(kTwoPi, -p) *
                             std::pow(std::abs(alpha), -(p + 1) / 2) * drive * t;
  if (bracket <= 0) return std::nullopt;
  return std::pow(bracket, -2 / (p - 1));
}

}  // namespace dnls
