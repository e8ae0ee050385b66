#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnls/solver.hpp"

namespace dnls {

struct CheckResult {
  std::string name;
  double max_violation = 0;
  double tolerance = 0;
  bool passed = false;  // max_violation <= tolerance
  std::optional<double> worst_time;
  bool applicable = true;
  std::string note;
};

// Flat observable series; either taken from an in-memory trajectory or parsed
// back from an archived CSV. The CSV carries no L1 column, so l1 stays empty
// on that path and the Holder check falls back to the outer inequality.
struct RecordedTrajectory {
  ProblemParams params;
  std::vector<double> t, M, total_density_abs, l2, lp1, sup;
  std::vector<double> l1;
  std::size_t resolved_prefix = 0;

  std::size_t size() const { return t.size(); }
};

RecordedTrajectory record_of(const Trajectory& traj);

// Centered finite differences of M against 2 Re(alpha) Re(lambda) ||u||^{p+1};
// degenerates to an M-drift check (tolerance 1e-8) when Re(alpha)Re(lambda)=0.
CheckResult check_growth_identity(const RecordedTrajectory& rt, double tolerance = 1e-4);

// |M| <= |alpha| ||u||_{L1}^2 <= (2pi)^{2p/(p+1)} |alpha| ||u||_{L^{p+1}}^2
CheckResult check_holder_chain(const RecordedTrajectory& rt);

// M(t) >= ode_lower_bound(M(0), t) * (1 - tolerance) on the resolved prefix.
CheckResult check_ode_comparison(const RecordedTrajectory& rt, double tolerance = 1e-4);

// t_detected <= bound_T0 * (1 + 1e-6)
CheckResult check_lifespan(const BlowupReport& report);

// Total density always; L2 only when Re lambda = 0; E2 only when p = 3,
// lambda = -i and a gauge-transformed energy series is supplied.
std::vector<CheckResult> check_conservation_suite(const RecordedTrajectory& rt,
                                                  std::span<const double> gauge_e2 = {});

std::vector<CheckResult> run_all_checks(const RecordedTrajectory& rt,
                                        const BlowupReport& report,
                                        std::span<const double> gauge_e2 = {});

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace dnls
