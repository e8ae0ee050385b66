#include "dnls/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dnls {
namespace {

constexpr double kAbsFloor = 1e-14;

CheckResult not_applicable(std::string name, double tolerance, std::string note) {
  CheckResult r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  r.passed = true;
  r.applicable = false;
  r.note = std::move(note);
  return r;
}

void finalize(CheckResult& r) { r.passed = r.max_violation <= r.tolerance; }

double uniform_spacing(const std::vector<double>& t) {
  const double h = t[1] - t[0];
  for (std::size_t i = 1; i + 1 < t.size(); ++i)
    if (std::abs(t[i + 1] - t[i] - h) > 1e-9 * h)
      throw std::invalid_argument("check_growth_identity: samples are not uniform");
  return h;
}

}  // namespace

RecordedTrajectory record_of(const Trajectory& traj) {
  RecordedTrajectory rt;
  rt.params = traj.params;
  rt.resolved_prefix = traj.resolved_prefix();
  const std::size_t n = traj.obs.size();
  rt.t = traj.times;
  rt.M.reserve(n);
  rt.total_density_abs.reserve(n);
  rt.l1.reserve(n);
  rt.l2.reserve(n);
  rt.lp1.reserve(n);
  rt.sup.reserve(n);
  for (const Observables& o : traj.obs) {
    rt.M.push_back(o.M);
    rt.total_density_abs.push_back(o.total_density_abs);
    rt.l1.push_back(o.l1);
    rt.l2.push_back(o.l2);
    rt.lp1.push_back(o.lp1);
    rt.sup.push_back(o.sup);
  }
  return rt;
}

CheckResult check_growth_identity(const RecordedTrajectory& rt, double tolerance) {
  if (rt.size() < 5)
    throw std::invalid_argument("check_growth_identity: need at least 5 samples");
  const double h = uniform_spacing(rt.t);
  const double drive = std::real(rt.params.alpha) * std::real(rt.params.lambda);

  CheckResult r;
  r.name = "growth_identity";

  if (drive == 0.0) {
    // right side vanishes identically, so M must stay constant
    r.tolerance = 1e-8;
    r.note = "Re(alpha)Re(lambda) = 0: M-drift mode";
    double scale = kAbsFloor;
    for (double m : rt.M) scale = std::max(scale, std::abs(m));
    for (std::size_t i = 0; i < rt.size(); ++i) {
      const double v = std::abs(rt.M[i] - rt.M[0]) / scale;
      if (v > r.max_violation) {
        r.max_violation = v;
        r.worst_time = rt.t[i];
      }
    }
    finalize(r);
    return r;
  }

  r.tolerance = tolerance;
  const std::size_t prefix = std::min(rt.resolved_prefix, rt.size());
  if (prefix < 3) {
    return not_applicable(r.name, tolerance, "fewer than 3 resolved samples");
  }
  for (std::size_t i = 1; i + 1 < prefix; ++i) {
    const double fd = (rt.M[i + 1] - rt.M[i - 1]) / (2 * h);
    const double rhs = 2 * drive * std::pow(rt.lp1[i], rt.params.p + 1);
    const double scale = std::max({std::abs(fd), std::abs(rhs), kAbsFloor});
    const double v = std::abs(fd - rhs) / scale;
    if (v > r.max_violation) {
      r.max_violation = v;
      r.worst_time = rt.t[i];
    }
  }
  finalize(r);
  return r;
}

CheckResult check_holder_chain(const RecordedTrajectory& rt) {
  CheckResult r;
  r.name = "holder_chain";
  r.tolerance = 1e-10;
  const double p = rt.params.p;
  const double a = std::abs(rt.params.alpha);
  const double pref = std::pow(kTwoPi, 2 * p / (p + 1));
  const bool have_l1 = rt.l1.size() == rt.size();
  if (!have_l1) r.note = "L1 not recorded; outer inequality only";

  for (std::size_t i = 0; i < rt.size(); ++i) {
    const double absM = std::abs(rt.M[i]);
    const double outer = pref * a * rt.lp1[i] * rt.lp1[i];
    double v;
    if (have_l1) {
      const double mid = a * rt.l1[i] * rt.l1[i];
      v = std::max((absM - mid) / std::max(mid, kAbsFloor),
                   (mid - outer) / std::max(outer, kAbsFloor));
    } else {
      v = (absM - outer) / std::max(outer, kAbsFloor);
    }
    v = std::max(v, 0.0);
    if (v > r.max_violation) {
      r.max_violation = v;
      r.worst_time = rt.t[i];
    }
  }
  finalize(r);
  return r;
}

CheckResult check_ode_comparison(const RecordedTrajectory& rt, double tolerance) {
  CheckResult r;
  r.name = "ode_comparison";
  r.tolerance = tolerance;
  if (rt.size() == 0) return not_applicable(r.name, tolerance, "empty trajectory");

  const double drive = std::real(rt.params.alpha) * std::real(rt.params.lambda);
  const double M0 = rt.M[0];
  if (!(drive > 0))
    return not_applicable(r.name, tolerance, "Re(alpha)Re(lambda) <= 0");
  if (!(M0 > 0)) return not_applicable(r.name, tolerance, "M(0) <= 0");

  const std::size_t prefix = std::min(rt.resolved_prefix, rt.size());
  if (prefix == 0) return not_applicable(r.name, tolerance, "no resolved samples");
  for (std::size_t i = 0; i < prefix; ++i) {
    const auto bound =
        ode_lower_bound(M0, rt.t[i], rt.params.p, rt.params.lambda, rt.params.alpha);
    double v;
    if (!bound) {
      v = 1.0;  // sample survives past the comparison solution's escape time
    } else {
      v = std::max(0.0, (*bound - rt.M[i]) / *bound);
    }
    if (v > r.max_violation) {
      r.max_violation = v;
      r.worst_time = rt.t[i];
    }
  }
  finalize(r);
  return r;
}

CheckResult check_lifespan(const BlowupReport& report) {
  CheckResult r;
  r.name = "lifespan";
  r.tolerance = 1e-6;
  if (!report.bound_T0)
    return not_applicable(r.name, r.tolerance, "no blowup expected");
  if (!report.detected)
    return not_applicable(r.name, r.tolerance, "no blowup detected");
  r.max_violation = std::max(0.0, (*report.t_detected - *report.bound_T0) / *report.bound_T0);
  r.worst_time = *report.t_detected;
  finalize(r);
  return r;
}

std::vector<CheckResult> check_conservation_suite(const RecordedTrajectory& rt,
                                                  std::span<const double> gauge_e2) {
  std::vector<CheckResult> out;

  {
    CheckResult r;
    r.name = "total_density";
    r.tolerance = 1e-10;
    for (std::size_t i = 0; i < rt.size(); ++i) {
      const double v = rt.total_density_abs[i] / std::max(rt.l2[i], 1e-300);
      if (v > r.max_violation) {
        r.max_violation = v;
        r.worst_time = rt.t[i];
      }
    }
    finalize(r);
    out.push_back(std::move(r));
  }

  if (std::real(rt.params.lambda) == 0.0 && rt.size() > 0) {
    CheckResult r;
    r.name = "l2_conservation";
    r.tolerance = 1e-8;
    const double scale = std::max(rt.l2[0], 1e-300);
    for (std::size_t i = 0; i < rt.size(); ++i) {
      const double v = std::abs(rt.l2[i] - rt.l2[0]) / scale;
      if (v > r.max_violation) {
        r.max_violation = v;
        r.worst_time = rt.t[i];
      }
    }
    finalize(r);
    out.push_back(std::move(r));
  } else {
    out.push_back(not_applicable("l2_conservation", 1e-8, "Re(lambda) != 0"));
  }

  const bool gauge_case = std::abs(rt.params.p - 3.0) <= 1e-12 &&
                          std::abs(rt.params.lambda - Complex(0, -1)) <= 1e-12;
  if (gauge_case && !gauge_e2.empty()) {
    CheckResult r;
    r.name = "e2_conservation";
    r.tolerance = 1e-5;
    double scale = kAbsFloor;
    for (double e : gauge_e2) scale = std::max(scale, std::abs(e));
    for (std::size_t i = 0; i < gauge_e2.size(); ++i) {
      const double v = std::abs(gauge_e2[i] - gauge_e2[0]) / scale;
      if (v > r.max_violation) {
        r.max_violation = v;
        r.worst_time = i < rt.size() ? rt.t[i] : 0.0;
      }
    }
    finalize(r);
    out.push_back(std::move(r));
  } else {
    out.push_back(not_applicable("e2_conservation", 1e-5,
                                 gauge_case ? "gauge energy series unavailable"
                                            : "not the p = 3, lambda = -i regime"));
  }
  return out;
}

std::vector<CheckResult> run_all_checks(const RecordedTrajectory& rt,
                                        const BlowupReport& report,
                                        std::span<const double> gauge_e2) {
  std::vector<CheckResult> out;
  out.push_back(check_growth_identity(rt));
  out.push_back(check_holder_chain(rt));
  out.push_back(check_ode_comparison(rt));
  out.push_back(check_lifespan(report));
  for (auto& c : check_conservation_suite(rt, gauge_e2)) out.push_back(std::move(c));
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

}  // namespace dnls
