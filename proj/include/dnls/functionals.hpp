#pragma once

#include <complex>
#include <optional>

#include "dnls/field.hpp"

namespace dnls {

// Parameters of  i u_t + u_xx = lambda d_x(|u|^{p-1} u)  together with the
// multiplier alpha entering the blowup functional M.
struct ProblemParams {
  double p = 3.0;
  Complex lambda{1.0, 0.0};
  Complex alpha{1.0, 0.0};
};

// I(u) = int_0^{2pi} u(x) int_0^x conj(u(y)) dy dx, evaluated via the spectral
// closed form 2 pi i sum_{k != 0} |c_k|^2 / k. Purely imaginary for zero-mean u.
Complex pairing_integral(const Field& u);

// M = Im(alpha * I(u))
double blowup_functional(const Field& u, Complex alpha);

// Re(lambda) * Im(I(u0)) > 0, the sign condition that forces finite-time blowup.
bool check_condition_i(const Field& u0, Complex lambda);

// Canonical multiplier sign(Re lambda) when the sign condition holds; a valid
// alpha exists iff check_condition_i is true.
std::optional<Complex> choose_alpha(const Field& u0, Complex lambda);

// (2pi)^p / ((p-1) |Re lambda|) * |I(u0)|^{-(p-1)/2}
double lifespan_bound(const Field& u0, double p, Complex lambda);

// 2 pi c_0
Complex total_density(const Field& u);

// int (|w_x|^2 + (1/2) Im(|w|^2 conj(w) w_x)) dx with w_x computed spectrally.
double energy_E2(const Field& w);

// (2pi)^{2p/(p+1)} |alpha| ||u||_{L^{p+1}}^2, an upper bound for |M|.
double holder_majorant(const Field& u, Complex alpha, double p);

// Solution of the comparison inequality,
//   (M0^{-(p-1)/2} - (p-1)(2pi)^{-p} |alpha|^{-(p+1)/2} Re(alpha) Re(lambda) t)^{-2/(p-1)};
// nullopt once the bracket reaches zero (the comparison ODE has escaped).
std::optional<double> ode_lower_bound(double M0, double t, double p, Complex lambda,
                                      Complex alpha);

}  // namespace dnls
