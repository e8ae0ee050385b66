#include "dnls/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dnls/io.hpp"
#include "dnls/verify.hpp"

namespace dnls::cli {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// byte offset -> "line:col" for parse-error anchoring
std::string line_anchor(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) throw SpecError(where + ": unknown key '" + key + "'");
  }
}

Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SpecError(where + ": complex values are [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

bool is_gauge_regime(const ProblemParams& p) {
  return std::abs(p.p - 3.0) <= 1e-12 && std::abs(p.lambda - Complex(0, -1)) <= 1e-12;
}

void print_check_line(const CheckResult& c) {
  const char* tag = !c.applicable ? " N/A" : (c.passed ? "PASS" : "FAIL");
  std::printf("[%s] %-22s max_violation=%.3e tolerance=%.3e%s%s\n", tag, c.name.c_str(),
              c.max_violation, c.tolerance, c.note.empty() ? "" : "  ",
              c.note.c_str());
}

struct RunArtifacts {
  ProblemParams params;
  Field u0;
  IntegrationResult result;
  std::vector<double> gauge_e2;
  std::vector<CheckResult> checks;
};

RunArtifacts execute(const RunSpec& spec) {
  RunArtifacts art{.params = {}, .u0 = build_initial_field(spec), .result = {}, .gauge_e2 = {}, .checks = {}};
  art.params = effective_params(spec, art.u0);
  art.result = integrate(art.u0, art.params, spec.solver);

  BlowupReport& report = art.result.report;
  if (is_gauge_regime(art.params) && spec.solver.record_states) {
    const GaugeTrajectory gauge = gauge_transform_trajectory(art.result.trajectory);
    // branch evaluation of E2; the spectral form would see the wrap mismatch
    art.gauge_e2.reserve(art.result.trajectory.states.size());
    for (const Field& u : art.result.trajectory.states)
      art.gauge_e2.push_back(gauge_energy(u));
    report.gauge_wrap_mismatch = gauge.max_wrap_mismatch;
  }

  art.checks = run_all_checks(record_of(art.result.trajectory), report, art.gauge_e2);
  return art;
}

}  // namespace

RunSpec headline_spec() {
  RunSpec s;
  s.n = 256;
  s.initial_data = ModeInit{1, Complex(1, 0)};
  s.params.p = 3;
  s.params.lambda = Complex(1, 0);
  s.solver.dt_init = 1e-3;
  s.solver.dt_min = 1e-12;
  s.solver.t_max = 25.0;
  s.solver.step_tolerance = 1e-8;
  s.solver.blowup_sup_threshold = 1e8;
  s.solver.sample_interval = 1e-3;
  s.solver.dealias_factor = 2.0;
  s.outputs = "out";
  return s;
}

RunSpec conservative_spec() {
  RunSpec s = headline_spec();
  s.initial_data = ModeInit{1, Complex(0.01, 0)};
  s.params.lambda = Complex(0, -1);
  s.solver.t_max = 1.0;
  s.solver.sample_interval = 1e-2;
  return s;
}

RunSpec parse_run_spec(const std::string& text, const std::string& filename) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(filename + ":" + line_anchor(text, e.byte) + ": " + e.what());
  }
  try {
    RunSpec s;
    require_keys(j, filename,
                 {"grid", "initial_data", "params", "solver", "outputs"});

    if (j.contains("grid")) {
      require_keys(j.at("grid"), filename + ": grid", {"n"});
      s.n = j.at("grid").value("n", s.n);
    }

    if (!j.contains("initial_data"))
      throw SpecError(filename + ": missing 'initial_data'");
    const json& init = j.at("initial_data");
    const std::string type = init.value("type", "");
    if (type == "mode") {
      require_keys(init, filename + ": initial_data", {"type", "k", "amplitude"});
      ModeInit m;
      m.k = init.value("k", 1);
      if (init.contains("amplitude"))
        m.amplitude = parse_complex(init.at("amplitude"), filename + ": amplitude");
      s.initial_data = m;
    } else if (type == "coefficients") {
      require_keys(init, filename + ": initial_data", {"type", "coefficients"});
      CoefficientsInit c;
      for (const auto& e : init.at("coefficients")) {
        if (!e.is_array() || e.size() != 3)
          throw SpecError(filename + ": coefficient entries are [k, re, im]");
        c.modes.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
      }
      s.initial_data = c;
    } else if (type == "random") {
      require_keys(init, filename + ": initial_data", {"type", "seed", "n_modes", "decay"});
      RandomInit r;
      r.seed = init.value("seed", std::uint64_t{1});
      r.n_modes = init.value("n_modes", 8);
      r.decay = init.value("decay", 2.0);
      s.initial_data = r;
    } else {
      throw SpecError(filename +
                      ": initial_data.type must be 'mode', 'coefficients' or 'random'");
    }

    if (j.contains("params")) {
      const json& p = j.at("params");
      require_keys(p, filename + ": params", {"p", "lambda", "alpha", "alpha_user_supplied"});
      s.params.p = p.value("p", 3.0);
      if (p.contains("lambda"))
        s.params.lambda = parse_complex(p.at("lambda"), filename + ": lambda");
      if (p.contains("alpha")) {
        s.params.alpha = parse_complex(p.at("alpha"), filename + ": alpha");
        s.user_alpha = p.value("alpha_user_supplied", true);
      }
    }

    if (j.contains("solver")) {
      const json& sv = j.at("solver");
      require_keys(sv, filename + ": solver",
                   {"dt_init", "dt_min", "t_max", "step_tolerance",
                    "blowup_sup_threshold", "sample_interval", "dealias_factor"});
      s.solver.dt_init = sv.value("dt_init", s.solver.dt_init);
      s.solver.dt_min = sv.value("dt_min", s.solver.dt_min);
      s.solver.t_max = sv.value("t_max", s.solver.t_max);
      s.solver.step_tolerance = sv.value("step_tolerance", s.solver.step_tolerance);
      s.solver.blowup_sup_threshold =
          sv.value("blowup_sup_threshold", s.solver.blowup_sup_threshold);
      s.solver.sample_interval = sv.value("sample_interval", s.solver.sample_interval);
      s.solver.dealias_factor = sv.value("dealias_factor", s.solver.dealias_factor);
    }

    s.outputs = j.value("outputs", s.outputs);
    return s;
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(filename + ": " + e.what());
  }
}

std::string run_spec_to_json(const RunSpec& spec) {
  ordered_json j;
  j["grid"] = {{"n", spec.n}};
  ordered_json init;
  if (const auto* m = std::get_if<ModeInit>(&spec.initial_data)) {
    init["type"] = "mode";
    init["k"] = m->k;
    init["amplitude"] = complex_json(m->amplitude);
  } else if (const auto* c = std::get_if<CoefficientsInit>(&spec.initial_data)) {
    init["type"] = "coefficients";
    auto arr = ordered_json::array();
    for (const auto& e : c->modes) arr.push_back({e[0], e[1], e[2]});
    init["coefficients"] = std::move(arr);
  } else if (const auto* r = std::get_if<RandomInit>(&spec.initial_data)) {
    init["type"] = "random";
    init["seed"] = r->seed;
    init["n_modes"] = r->n_modes;
    init["decay"] = r->decay;
  }
  j["initial_data"] = std::move(init);
  j["params"] = {{"p", spec.params.p},
                 {"lambda", complex_json(spec.params.lambda)},
                 {"alpha", complex_json(spec.params.alpha)},
                 {"alpha_user_supplied", spec.user_alpha}};
  j["solver"] = {{"dt_init", spec.solver.dt_init},
                 {"dt_min", spec.solver.dt_min},
                 {"t_max", spec.solver.t_max},
                 {"step_tolerance", spec.solver.step_tolerance},
                 {"blowup_sup_threshold", spec.solver.blowup_sup_threshold},
                 {"sample_interval", spec.solver.sample_interval},
                 {"dealias_factor", spec.solver.dealias_factor}};
  j["outputs"] = spec.outputs;
  return j.dump(2) + "\n";
}

void apply_env_seed(RunSpec& spec) {
  const char* env = std::getenv("DNLS_SEED");
  if (!env) return;
  if (auto* r = std::get_if<RandomInit>(&spec.initial_data)) {
    try {
      r->seed = std::stoull(env);
    } catch (const std::exception&) {
      throw SpecError(std::string("DNLS_SEED: not an integer: '") + env + "'");
    }
  }
}

Field build_initial_field(const RunSpec& spec) {
  const TorusGrid grid = make_grid(spec.n);
  if (const auto* m = std::get_if<ModeInit>(&spec.initial_data)) {
    if (m->k == 0) throw SpecError("initial_data: mode preset requires k != 0");
    if (m->k < grid.min_wavenumber() || m->k > grid.max_wavenumber())
      throw SpecError("initial_data: mode k out of band for n = " + std::to_string(spec.n));
    std::vector<Complex> c(spec.n, Complex(0, 0));
    c[grid.index_of(m->k)] = m->amplitude;
    return Field::from_coefficients(grid, std::move(c));
  }
  if (const auto* ci = std::get_if<CoefficientsInit>(&spec.initial_data)) {
    std::vector<Complex> c(spec.n, Complex(0, 0));
    for (const auto& e : ci->modes) {
      const int k = static_cast<int>(e[0]);
      if (k < grid.min_wavenumber() || k > grid.max_wavenumber())
        throw SpecError("initial_data: wavenumber " + std::to_string(k) + " out of band");
      c[grid.index_of(k)] = Complex(e[1], e[2]);
    }
    return Field::from_coefficients(grid, std::move(c));
  }
  const auto& r = std::get<RandomInit>(spec.initial_data);
  return random_zero_mean(grid, r.seed, r.n_modes, r.decay);
}

ProblemParams effective_params(const RunSpec& spec, const Field& u0) {
  ProblemParams params = spec.params;
  if (!spec.user_alpha)
    params.alpha = choose_alpha(u0, params.lambda).value_or(Complex(1, 0));
  return params;
}

int cmd_run(RunSpec spec, const std::string& out_dir_flag) {
  apply_env_seed(spec);
  const fs::path out_dir = out_dir_flag.empty() ? spec.outputs : out_dir_flag;
  fs::create_directories(out_dir);

  RunArtifacts art = execute(spec);

  RunSpec echo = spec;
  echo.params = art.params;
  io::write_text_atomic(out_dir / "runspec.json", run_spec_to_json(echo));
  io::write_text_atomic(out_dir / "initial_field.json",
                        io::field_to_json(art.u0).dump(2) + "\n");
  io::write_text_atomic(out_dir / "trajectory.csv",
                        io::trajectory_to_csv(record_of(art.result.trajectory)));
  io::write_text_atomic(out_dir / "blowup_report.json",
                        io::report_to_json(art.result.report).dump(2) + "\n");
  io::write_text_atomic(out_dir / "verify.json",
                        io::checks_to_json(art.checks).dump(2) + "\n");

  const BlowupReport& rep = art.result.report;
  std::printf("run: %s; verdict=%s", rep.detected ? "blowup detected" : "no blowup",
              to_string(rep.verdict));
  if (rep.t_detected) std::printf("; t_detected=%.9g", *rep.t_detected);
  if (rep.bound_T0) std::printf("; bound_T0=%.9g", *rep.bound_T0);
  std::printf("\n");
  for (const auto& c : art.checks) print_check_line(c);
  return all_passed(art.checks) ? 0 : 1;
}

int cmd_sweep(RunSpec templ, const std::vector<double>& amplitudes, int jobs,
              const std::string& out_dir_flag) {
  if (amplitudes.size() < 2) throw SpecError("sweep: need at least 2 amplitudes");
  apply_env_seed(templ);
  const fs::path out_dir = out_dir_flag.empty() ? templ.outputs : out_dir_flag;
  fs::create_directories(out_dir);

  struct Row {
    double A = 0;
    double I_abs = 0;
    std::optional<double> bound, t_detected;
    bool consistent = false;
    bool ok = false;
    std::string error;
  };
  std::vector<Row> rows(amplitudes.size());

  const Field base = build_initial_field(templ);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (std::size_t i; (i = cursor.fetch_add(1)) < amplitudes.size();) {
      Row& row = rows[i];
      row.A = amplitudes[i];
      try {
        const Field u0 = scaled(base, Complex(amplitudes[i], 0));
        RunSpec spec = templ;
        spec.solver.record_states = false;  // sweeps only need the observables
        ProblemParams params = effective_params(spec, u0);
        row.I_abs = std::abs(pairing_integral(u0));
        if (check_condition_i(u0, params.lambda)) {
          // give each run a window just past its own bound
          const double T0 = lifespan_bound(u0, params.p, params.lambda);
          spec.solver.t_max = std::max(1.05 * T0, spec.solver.sample_interval);
        }
        const IntegrationResult res = integrate(u0, params, spec.solver);
        row.bound = res.report.bound_T0;
        row.t_detected = res.report.t_detected;
        row.consistent = res.report.verdict == BlowupVerdict::consistent;
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  int n_threads = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(amplitudes.size())));
  {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ostringstream csv;
  csv << "A,I_abs,bound_T0,t_detected,consistent\n";
  const double nan = std::nan("");
  for (const Row& r : rows) {
    csv << io::g17(r.A) << ',' << io::g17(r.I_abs) << ','
        << io::g17(r.bound ? *r.bound : nan) << ','
        << io::g17(r.t_detected ? *r.t_detected : nan) << ',' << (r.consistent ? 1 : 0)
        << '\n';
  }
  io::write_text_atomic(out_dir / "sweep_summary.csv", csv.str());

  int status = 0;
  for (const Row& r : rows) {
    if (!r.ok) {
      std::fprintf(stderr, "sweep: run A=%g failed: %s\n", r.A, r.error.c_str());
      status = 1;
    } else if (r.bound && !r.consistent) {
      std::fprintf(stderr, "sweep: run A=%g not consistent with its bound\n", r.A);
      status = 1;
    }
  }

  // bound_T0(A) must scale as A^{-(p-1)}
  std::optional<double> ref;
  double worst = 0;
  for (const Row& r : rows) {
    if (!r.ok || !r.bound) continue;
    const double c = *r.bound * std::pow(std::abs(r.A), templ.params.p - 1);
    if (!ref) ref = c;
    worst = std::max(worst, std::abs(c - *ref) / *ref);
  }
  std::printf("sweep: %zu runs, amplitude-scaling deviation %.3e\n", rows.size(), worst);
  if (worst > 1e-10) {
    std::fprintf(stderr, "sweep: bound scaling violates A^{-(p-1)} by %.3e\n", worst);
    status = std::max(status, 1);
  }
  return status;
}

int cmd_plotdata(const std::string& run_dir) {
  const fs::path dir = run_dir;
  RecordedTrajectory rt;
  io::trajectory_from_csv(io::read_text(dir / "trajectory.csv"), rt);
  const RunSpec spec =
      parse_run_spec(io::read_text(dir / "runspec.json"), (dir / "runspec.json").string());
  const ProblemParams params = effective_params(spec, build_initial_field(spec));

  std::ostringstream m_series, sup_series, bound_series;
  for (std::size_t i = 0; i < rt.size(); ++i) {
    m_series << io::g17(rt.t[i]) << ' ' << io::g17(rt.M[i]) << '\n';
    sup_series << io::g17(rt.t[i]) << ' ' << io::g17(rt.sup[i]) << '\n';
  }
  const double drive = std::real(params.alpha) * std::real(params.lambda);
  if (drive > 0 && rt.M[0] > 0) {
    for (std::size_t i = 0; i < rt.size(); ++i) {
      const auto b = ode_lower_bound(rt.M[0], rt.t[i], params.p, params.lambda, params.alpha);
      if (!b) break;  // series ends at the singular time
      bound_series << io::g17(rt.t[i]) << ' ' << io::g17(*b) << '\n';
    }
  }
  io::write_text_atomic(dir / "series_M.dat", m_series.str());
  io::write_text_atomic(dir / "series_sup.dat", sup_series.str());
  io::write_text_atomic(dir / "series_bound.dat", bound_series.str());
  return 0;
}

int cmd_verify(const std::string& run_dir) {
  const fs::path dir = run_dir;
  const RunSpec spec =
      parse_run_spec(io::read_text(dir / "runspec.json"), (dir / "runspec.json").string());
  const BlowupReport report =
      io::report_from_json(json::parse(io::read_text(dir / "blowup_report.json")));

  RecordedTrajectory rt;
  io::trajectory_from_csv(io::read_text(dir / "trajectory.csv"), rt);
  rt.params = effective_params(spec, build_initial_field(spec));
  rt.resolved_prefix = std::min<std::size_t>(report.resolved_sample_count, rt.size());

  const auto checks = run_all_checks(rt, report);
  io::write_text_atomic(dir / "verify.json", io::checks_to_json(checks).dump(2) + "\n");
  for (const auto& c : checks) print_check_line(c);
  return all_passed(checks) ? 0 : 1;
}

}  // namespace dnls::cli
