#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dnls/field.hpp"
#include "dnls/functionals.hpp"

namespace dnls {

struct SolverConfig {
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double t_max = 1.0;
  double step_tolerance = 1e-8;       // relative L2 step-doubling target
  double blowup_sup_threshold = 1e8;  // on ||u||_inf
  double sample_interval = 1e-2;
  double dealias_factor = 2.0;        // fully dealiases the cubic case p = 3
  bool record_states = true;          // keep Field snapshots alongside observables

  void validate() const;  // throws std::invalid_argument
};

struct Observables {
  double M = 0;
  double total_density_abs = 0;
  double l1 = 0;
  double l2 = 0;
  double lp1 = 0;
  double sup = 0;
  bool resolved = true;
};

struct Trajectory {
  ProblemParams params;
  double sample_interval = 0;
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<Observables> obs;

  // samples [0, prefix) are resolved; stops at the first under-resolved one
  std::size_t resolved_prefix() const;
};

enum class BlowupTrigger { sup_threshold, dt_floor, nonfinite_value, t_max_reached };
enum class BlowupVerdict { consistent, bound_violated, no_blowup_expected, inconclusive };

const char* to_string(BlowupTrigger t);
const char* to_string(BlowupVerdict v);

struct BlowupReport {
  bool detected = false;
  std::optional<double> t_detected;
  BlowupTrigger trigger = BlowupTrigger::t_max_reached;
  std::optional<double> bound_T0;
  BlowupVerdict verdict = BlowupVerdict::inconclusive;

  // diagnostics
  double pairing_integral_abs = 0;
  double last_time = 0;
  std::size_t sample_count = 0;
  std::size_t resolved_sample_count = 0;
  std::optional<double> gauge_wrap_mismatch;  // filled on gauge-transformed runs
};

// lambda * d_x of the dealiased pointwise power |u|^{p-1} u.
Field nonlinearity(const Field& u, double p, Complex lambda, double dealias_factor);

// One integrating-factor RK4 step of c_k' = -i k^2 c_k - i N_k(u); the linear
// flow e^{-i k^2 dt} is exact per mode.
Field step_ifrk4(const Field& u, double dt, const ProblemParams& params,
                 const SolverConfig& config);

// Energy fraction carried by the top 10% of wavenumbers; the under-resolution
// marker compares this against 1e-4.
double tail_energy_fraction(const Field& u);

struct IntegrationResult {
  Trajectory trajectory;
  BlowupReport report;
};

// Adaptive step-doubling integration with blowup detection and uniformly
// spaced observable recording. u0 must be zero-mean and lambda nonzero.
IntegrationResult integrate(const Field& u0, const ProblemParams& params,
                            const SolverConfig& config);

struct GaugeTrajectory {
  std::vector<double> times;
  std::vector<Field> states;          // w, evaluated on the branch [0, 2pi)
  std::vector<double> wrap_mismatch;  // |e^{i ||u||_{L2}^2 / 2} - 1| per sample
  double max_wrap_mismatch = 0;
};

// w = u * exp((i/2) int_0^x |u|^2 dy - (i/2) int_0^t [Im(conj(u) u_x)(t',0)
// + 4 |u(t',0)|^4] dt') for trajectories with p = 3, lambda = -i. The spatial
// phase carries the secular mean term, so w is periodic only up to the
// recorded wrap mismatch; |w| = |u| pointwise regardless.
GaugeTrajectory gauge_transform_trajectory(const Trajectory& traj);

// E2 of the gauge transform of u evaluated on the branch: w_x is expanded
// through the phase as (u_x + (i/2)|u|^2 u) e^{i phi}, so the secular phase
// cancels exactly and no periodicity assumption on w enters.
double gauge_energy(const Field& u);

}  // namespace dnls
