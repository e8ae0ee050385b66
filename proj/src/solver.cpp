#include "dnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dnls {
namespace {

constexpr double kTailFractionLimit = 1e-4;
constexpr double kDensityRelTol = 1e-10;

int dealias_size(int n, double factor) {
  const int m = 2 * static_cast<int>(std::ceil(factor * n / 2.0));
  return std::max(m, std::max(n, 8));
}

double rel_l2_discrepancy(const Field& a, const Field& b) {
  double num = 0, den = 0;
  for (int j = 0; j < a.size(); ++j) {
    num += std::norm(a.samples()[j] - b.samples()[j]);
    den += std::norm(b.samples()[j]);
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

double sup_norm(const Field& u) {
  double m = 0;
  for (const auto& s : u.samples()) m = std::max(m, std::abs(s));
  return m;
}

Observables observe(const Field& u, const ProblemParams& params) {
  Observables o;
  o.M = blowup_functional(u, params.alpha);
  o.total_density_abs = std::abs(total_density(u));
  o.l1 = norm(u, 1.0);
  o.l2 = norm(u, 2.0);
  o.lp1 = norm(u, params.p + 1.0);
  o.sup = sup_norm(u);
  o.resolved = tail_energy_fraction(u) <= kTailFractionLimit;
  return o;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(dt_min > 0 && dt_init > 0 && t_max > 0 && sample_interval > 0))
    throw std::invalid_argument("SolverConfig: time scales must be positive");
  if (!(dt_min < dt_init && dt_init <= sample_interval && sample_interval <= t_max))
    throw std::invalid_argument(
        "SolverConfig: need dt_min < dt_init <= sample_interval <= t_max");
  if (!(step_tolerance > 0))
    throw std::invalid_argument("SolverConfig: step_tolerance must be positive");
  if (!(dealias_factor >= 1))
    throw std::invalid_argument("SolverConfig: dealias_factor must be >= 1");
}

std::size_t Trajectory::resolved_prefix() const {
  std::size_t r = 0;
  while (r < obs.size() && obs[r].resolved) ++r;
  return r;
}

const char* to_string(BlowupTrigger t) {
  switch (t) {
    case BlowupTrigger::sup_threshold: return "sup_threshold";
    case BlowupTrigger::dt_floor: return "dt_floor";
    case BlowupTrigger::nonfinite_value: return "nonfinite_value";
    case BlowupTrigger::t_max_reached: return "t_max_reached";
  }
  return "unknown";
}

const char* to_string(BlowupVerdict v) {
  switch (v) {
    case BlowupVerdict::consistent: return "consistent";
    case BlowupVerdict::bound_violated: return "bound_violated";
    case BlowupVerdict::no_blowup_expected: return "no_blowup_expected";
    case BlowupVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Field nonlinearity(const Field& u, double p, Complex lambda, double dealias_factor) {
  if (!(p > 1)) throw std::invalid_argument("nonlinearity: p must be > 1");
  const int n = u.size();
  if (lambda == Complex(0, 0))
    return Field::from_coefficients(u.grid(), std::vector<Complex>(n, Complex(0, 0)));

  const int m = dealias_size(n, dealias_factor);
  const Field up = (m == n) ? u : resample(u, m);
  std::vector<Complex> g(m);
  for (int j = 0; j < m; ++j) {
    const Complex s = up.samples()[j];
    const double a = std::abs(s);
    g[j] = (a == 0.0) ? Complex(0, 0) : std::pow(a, p - 1) * s;
  }
  Field gm = Field::from_samples(up.grid(), std::move(g));
  Field gn = (m == n) ? std::move(gm) : resample(gm, n);
  return scaled(derivative(gn), lambda);
}

Field step_ifrk4(const Field& u, double dt, const ProblemParams& params,
                 const SolverConfig& config) {
  if (!(dt > 0)) throw std::invalid_argument("step_ifrk4: dt must be positive");
  const int n = u.size();
  const TorusGrid& grid = u.grid();

  std::vector<Complex> E(n), E2(n);
  for (int i = 0; i < n; ++i) {
    const double k = grid.wavenumbers[i];
    E[i] = std::exp(Complex(0, -k * k * dt / 2));
    E2[i] = E[i] * E[i];
  }

  auto rhs = [&](const Field& v) {
    // -i * (nonlinearity transform)
    std::vector<Complex> r = nonlinearity(v, params.p, params.lambda, config.dealias_factor)
                                 .coefficients();
    for (auto& c : r) c *= Complex(0, -1);
    return r;
  };

  const std::vector<Complex>& a = u.coefficients();
  const std::vector<Complex> Na = rhs(u);

  std::vector<Complex> stage(n);
  for (int i = 0; i < n; ++i) stage[i] = E[i] * (a[i] + dt / 2.0 * Na[i]);
  const std::vector<Complex> Nb = rhs(Field::from_coefficients(grid, stage));

  for (int i = 0; i < n; ++i) stage[i] = E[i] * a[i] + dt / 2.0 * Nb[i];
  const std::vector<Complex> Nc = rhs(Field::from_coefficients(grid, stage));

  for (int i = 0; i < n; ++i) stage[i] = E2[i] * a[i] + dt * E[i] * Nc[i];
  const std::vector<Complex> Nd = rhs(Field::from_coefficients(grid, stage));

  std::vector<Complex> next(n);
  for (int i = 0; i < n; ++i)
    next[i] = E2[i] * a[i] +
              dt / 6.0 * (E2[i] * Na[i] + 2.0 * E[i] * (Nb[i] + Nc[i]) + Nd[i]);
  return Field::from_coefficients(grid, std::move(next));
}

double tail_energy_fraction(const Field& u) {
  const int n = u.size();
  const int cutoff = static_cast<int>(std::ceil(0.9 * (n / 2)));
  double tail = 0, total = 0;
  for (int i = 0; i < n; ++i) {
    const double e = std::norm(u.coefficients()[i]);
    total += e;
    if (std::abs(u.grid().wavenumbers[i]) >= cutoff) tail += e;
  }
  return total == 0 ? 0.0 : tail / total;
}

IntegrationResult integrate(const Field& u0, const ProblemParams& params,
                            const SolverConfig& config) {
  config.validate();
  if (!(params.p > 1)) throw std::invalid_argument("integrate: p must be > 1");
  if (params.lambda == Complex(0, 0))
    throw std::invalid_argument("integrate: lambda must be nonzero");
  if (!u0.is_zero_mean())
    throw std::invalid_argument("integrate: u0 must have vanishing total density");

  IntegrationResult res;
  Trajectory& traj = res.trajectory;
  BlowupReport& rep = res.report;
  traj.params = params;
  traj.sample_interval = config.sample_interval;

  const bool condition = check_condition_i(u0, params.lambda);
  rep.pairing_integral_abs = std::abs(pairing_integral(u0));
  if (condition) rep.bound_T0 = lifespan_bound(u0, params.p, params.lambda);

  auto record = [&](double t, const Field& u) {
    Observables o = observe(u, params);
    if (o.total_density_abs > kDensityRelTol * std::max(o.l2, 1e-300))
      throw std::runtime_error(
          "integrate: total density escaped tolerance at t = " + std::to_string(t) +
          "; M is no longer meaningful");
    traj.times.push_back(t);
    if (config.record_states) traj.states.push_back(u);
    traj.obs.push_back(o);
  };

  record(0.0, u0);

  Field u = u0;
  double t = 0;
  double t_prev = 0;
  double dt = config.dt_init;
  long sample_index = 1;

  bool stopped = false;
  while (!stopped) {
    const double t_sample = sample_index * config.sample_interval;
    if (t >= config.t_max - 1e-12 * config.t_max) {
      rep.detected = false;
      rep.trigger = BlowupTrigger::t_max_reached;
      break;
    }

    const double dt_step = std::min({dt, t_sample - t, config.t_max - t});
    const Field one = step_ifrk4(u, dt_step, params, config);
    const Field half = step_ifrk4(u, dt_step / 2, params, config);
    const Field two = step_ifrk4(half, dt_step / 2, params, config);

    const double err = rel_l2_discrepancy(one, two);
    if (!(err <= config.step_tolerance)) {  // also catches NaN
      dt /= 2;
      if (dt < config.dt_min) {
        rep.detected = true;
        rep.trigger = BlowupTrigger::dt_floor;
        rep.t_detected = t;
        stopped = true;
      }
      continue;
    }

    t_prev = t;
    t += dt_step;
    u = two;

    if (!all_finite(u)) {
      rep.detected = true;
      rep.trigger = BlowupTrigger::nonfinite_value;
      rep.t_detected = t_prev;
      break;
    }
    if (sup_norm(u) > config.blowup_sup_threshold) {
      rep.detected = true;
      rep.trigger = BlowupTrigger::sup_threshold;
      rep.t_detected = t_prev;  // last time at or below the threshold
      break;
    }

    if (err < config.step_tolerance / 64 && dt_step == dt)
      dt = std::min(dt * 2, config.sample_interval);

    if (t >= t_sample - 1e-9 * config.sample_interval) {
      t = t_sample;  // snap to the uniform lattice
      record(t, u);
      ++sample_index;
    }
  }

  rep.last_time = t;
  rep.sample_count = traj.times.size();
  rep.resolved_sample_count = traj.resolved_prefix();

  if (!condition) {
    rep.verdict = BlowupVerdict::no_blowup_expected;
  } else if (!rep.detected) {
    rep.verdict = BlowupVerdict::inconclusive;
  } else if (*rep.t_detected <= *rep.bound_T0 * (1 + 1e-6)) {
    rep.verdict = BlowupVerdict::consistent;
  } else {
    rep.verdict = BlowupVerdict::bound_violated;
  }
  return res;
}

GaugeTrajectory gauge_transform_trajectory(const Trajectory& traj) {
  const ProblemParams& params = traj.params;
  if (std::abs(params.p - 3.0) > 1e-12 || std::abs(params.lambda - Complex(0, -1)) > 1e-12)
    throw std::invalid_argument(
        "gauge_transform_trajectory: requires p = 3 and lambda = -i");
  if (traj.states.empty())
    throw std::invalid_argument("gauge_transform_trajectory: empty trajectory");

  GaugeTrajectory out;
  out.times = traj.times;
  out.states.reserve(traj.states.size());
  out.wrap_mismatch.reserve(traj.states.size());

  double boundary_integral = 0;  // int_0^t Im(conj(u) u_x)(t',0) + 4 |u(t',0)|^4 dt'
  double g_prev = 0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const Field& u = traj.states[i];
    const int n = u.size();

    const Field ux = derivative(u);
    const Complex u00 = u.samples()[0];
    const double g = std::imag(std::conj(u00) * ux.samples()[0]) + 4 * std::pow(std::abs(u00), 4);
    if (i > 0) boundary_integral += 0.5 * (traj.times[i] - traj.times[i - 1]) * (g_prev + g);
    g_prev = g;

    // running integral of |u|^2: zero-mean part spectrally, plus the secular
    // mean term c0 * x
    std::vector<Complex> dens(n);
    for (int j = 0; j < n; ++j) dens[j] = Complex(std::norm(u.samples()[j]), 0);
    Field density = Field::from_samples(u.grid(), std::move(dens));
    const Complex c0 = density.coefficient(0);
    std::vector<Complex> fluct = density.coefficients();
    fluct[u.grid().index_of(0)] = Complex(0, 0);
    const Field cumulative =
        antiderivative_from_zero(Field::from_coefficients(u.grid(), std::move(fluct)));

    std::vector<Complex> w(n);
    for (int j = 0; j < n; ++j) {
      const double S = std::real(cumulative.samples()[j]) + std::real(c0) * u.grid().points[j];
      w[j] = u.samples()[j] * std::polar(1.0, 0.5 * (S - boundary_integral));
    }
    out.states.push_back(Field::from_samples(u.grid(), std::move(w)));

    const double mass = std::real(c0) * kTwoPi;  // S(2pi) = ||u||_{L2}^2
    out.wrap_mismatch.push_back(std::abs(std::polar(1.0, 0.5 * mass) - 1.0));
    out.max_wrap_mismatch = std::max(out.max_wrap_mismatch, out.wrap_mismatch.back());
  }
  return out;
}

double gauge_energy(const Field& u) {
  const Field ux = derivative(u);
  double acc = 0;
  for (int j = 0; j < u.size(); ++j) {
    const Complex uj = u.samples()[j];
    const Complex D = ux.samples()[j] + Complex(0, 0.5) * std::norm(uj) * uj;
    acc += std::norm(D) + 0.5 * std::imag(std::norm(uj) * std::conj(uj) * D);
  }
  return acc * u.grid().spacing();
}

}  // namespace dnls
