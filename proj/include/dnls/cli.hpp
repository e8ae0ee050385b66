#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dnls/field.hpp"
#include "dnls/functionals.hpp"
#include "dnls/solver.hpp"

namespace dnls::cli {

struct ModeInit {
  int k = 1;
  Complex amplitude{1.0, 0.0};
};

struct CoefficientsInit {
  // [k, re, im] triples; unspecified modes are zero
  std::vector<std::array<double, 3>> modes;
};

struct RandomInit {
  std::uint64_t seed = 1;
  int n_modes = 8;
  double decay = 2.0;
};

using InitialData = std::variant<ModeInit, CoefficientsInit, RandomInit>;

struct RunSpec {
  int n = 256;
  InitialData initial_data = ModeInit{};
  ProblemParams params;
  bool user_alpha = false;  // alpha given explicitly (M-tracking experiments only)
  SolverConfig solver;
  std::string outputs = "out";
};

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The headline reproduction preset: k = 1, A = 1, lambda = 1, p = 3, n = 256.
RunSpec headline_spec();
// Small-data conservative preset: lambda = -i, p = 3, u0 = 0.01 e^{ix}, t in [0, 1].
RunSpec conservative_spec();

// Throws SpecError with a line-anchored message on malformed input.
RunSpec parse_run_spec(const std::string& text, const std::string& filename);
std::string run_spec_to_json(const RunSpec& spec);

// Honors the DNLS_SEED environment override for seeded random initial data.
void apply_env_seed(RunSpec& spec);
Field build_initial_field(const RunSpec& spec);
// The alpha actually recorded: user-supplied, else choose_alpha, else 1.
ProblemParams effective_params(const RunSpec& spec, const Field& u0);

// Exit codes: 0 all applicable checks pass, 1 check/run failure, 2 invalid input.
int cmd_run(RunSpec spec, const std::string& out_dir_flag = "");
int cmd_sweep(RunSpec templ, const std::vector<double>& amplitudes, int jobs,
              const std::string& out_dir_flag = "");
int cmd_plotdata(const std::string& run_dir);
int cmd_verify(const std::string& run_dir);

}  // namespace dnls::cli
