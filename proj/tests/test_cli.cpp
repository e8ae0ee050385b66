#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "dnls/cli.hpp"
#include "dnls/io.hpp"

using namespace dnls;
namespace fs = std::filesystem;

namespace {

const std::string kConservativeSpec = R"({
  "grid": {"n": 64},
  "initial_data": {"type": "mode", "k": 1, "amplitude": [0.01, 0.0]},
  "params": {"p": 3.0, "lambda": [0.0, -1.0]},
  "solver": {"dt_init": 1e-3, "t_max": 0.05, "sample_interval": 1e-2},
  "outputs": "out"
})";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dnls_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

int run_tool(const std::string& args) {
  const char* bin = std::getenv("DNLS_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "DNLS_BIN must point at the dnls binary (set by ctest)");
  const std::string cmd = std::string(bin) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("run spec parsing") {
  SUBCASE("round-trips through the echo format") {
    const cli::RunSpec spec = cli::parse_run_spec(kConservativeSpec, "spec.json");
    CHECK(spec.n == 64);
    CHECK(std::get<cli::ModeInit>(spec.initial_data).k == 1);
    CHECK(spec.params.lambda == Complex(0, -1));
    CHECK_FALSE(spec.user_alpha);
    CHECK(spec.solver.t_max == 0.05);

    const cli::RunSpec again = cli::parse_run_spec(cli::run_spec_to_json(spec), "echo.json");
    CHECK(again.n == spec.n);
    CHECK(again.params.lambda == spec.params.lambda);
    CHECK(again.solver.sample_interval == spec.solver.sample_interval);
    CHECK(cli::run_spec_to_json(again) == cli::run_spec_to_json(spec));
  }

  SUBCASE("malformed JSON gets a line-anchored message") {
    try {
      cli::parse_run_spec("{\n  \"grid\": {\n", "bad.json");
      FAIL("expected SpecError");
    } catch (const cli::SpecError& e) {
      CHECK(std::string(e.what()).find("bad.json:3") != std::string::npos);
    }
  }

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(cli::parse_run_spec(R"({"initial_data": {"type": "mode"}, "solvr": {}})",
                                        "s.json"),
                    cli::SpecError);
  }

  SUBCASE("initial data variants") {
    const std::string coeffs = R"({
      "grid": {"n": 64},
      "initial_data": {"type": "coefficients", "coefficients": [[1, 0.5, 0.0], [-2, 0.0, 0.25]]}
    })";
    const cli::RunSpec spec = cli::parse_run_spec(coeffs, "c.json");
    const Field u0 = cli::build_initial_field(spec);
    CHECK(u0.coefficient(1) == Complex(0.5, 0));
    CHECK(u0.coefficient(-2) == Complex(0, 0.25));

    const std::string random = R"({
      "initial_data": {"type": "random", "seed": 11, "n_modes": 6, "decay": 1.5},
      "grid": {"n": 64}
    })";
    const Field r = cli::build_initial_field(cli::parse_run_spec(random, "r.json"));
    const Field expect = random_zero_mean(make_grid(64), 11, 6, 1.5);
    CHECK(r.coefficients() == expect.coefficients());

    CHECK_THROWS_AS(cli::parse_run_spec(R"({"initial_data": {"type": "nope"}})", "t.json"),
                    cli::SpecError);
  }

  SUBCASE("mode k = 0 is rejected: constants are stationary") {
    const std::string spec = R"({"initial_data": {"type": "mode", "k": 0}})";
    CHECK_THROWS_AS(cli::build_initial_field(cli::parse_run_spec(spec, "k0.json")),
                    cli::SpecError);
  }
}

TEST_CASE("headline preset is pinned") {
  const cli::RunSpec s = cli::headline_spec();
  CHECK(s.n == 256);
  CHECK(std::get<cli::ModeInit>(s.initial_data).k == 1);
  CHECK(std::get<cli::ModeInit>(s.initial_data).amplitude == Complex(1, 0));
  CHECK(s.params.p == 3.0);
  CHECK(s.params.lambda == Complex(1, 0));
  CHECK(s.solver.dt_init == 1e-3);
  CHECK(s.solver.step_tolerance == 1e-8);
  CHECK(s.solver.blowup_sup_threshold == 1e8);
}

TEST_CASE("DNLS_SEED overrides the spec seed for random initial data") {
  cli::RunSpec spec = cli::parse_run_spec(
      R"({"grid": {"n": 64}, "initial_data": {"type": "random", "seed": 1, "n_modes": 5, "decay": 2.0}})",
      "r.json");
  setenv("DNLS_SEED", "123", 1);
  cli::apply_env_seed(spec);
  unsetenv("DNLS_SEED");
  CHECK(std::get<cli::RandomInit>(spec.initial_data).seed == 123);

  // non-random initial data is unaffected
  cli::RunSpec mode_spec = cli::parse_run_spec(kConservativeSpec, "spec.json");
  setenv("DNLS_SEED", "99", 1);
  cli::apply_env_seed(mode_spec);
  unsetenv("DNLS_SEED");
  CHECK(std::holds_alternative<cli::ModeInit>(mode_spec.initial_data));
}

TEST_CASE("effective alpha selection") {
  cli::RunSpec spec = cli::parse_run_spec(kConservativeSpec, "spec.json");
  const Field u0 = cli::build_initial_field(spec);
  // Re lambda = 0: no blowup alpha exists, recording falls back to 1
  CHECK(cli::effective_params(spec, u0).alpha == Complex(1, 0));

  spec.params.lambda = Complex(1, 0);
  CHECK(cli::effective_params(spec, u0).alpha == Complex(1, 0));
  spec.params.lambda = Complex(-1, 0);
  // Im I < 0 would be needed; for e^{ix} the condition fails, fallback again
  CHECK(cli::effective_params(spec, u0).alpha == Complex(1, 0));

  spec.user_alpha = true;
  spec.params.alpha = Complex(0, 2);
  CHECK(cli::effective_params(spec, u0).alpha == Complex(0, 2));
}

TEST_CASE("cmd_run writes the artifact set and is byte-deterministic") {
  const fs::path dir_a = fresh_dir("run_a");
  const fs::path dir_b = fresh_dir("run_b");
  const fs::path spec_path = dir_a / "spec.json";
  write_file(spec_path, kConservativeSpec);

  CHECK(run_tool("run --spec " + spec_path.string() + " --out " + dir_a.string()) == 0);
  CHECK(run_tool("run --spec " + spec_path.string() + " --out " + dir_b.string()) == 0);

  for (const char* name :
       {"runspec.json", "initial_field.json", "trajectory.csv", "blowup_report.json",
        "verify.json"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(dir_a / name));
    CHECK(io::read_text(dir_a / name) == io::read_text(dir_b / name));
  }

  const auto verify = nlohmann::json::parse(io::read_text(dir_a / "verify.json"));
  CHECK(verify["all_passed"].get<bool>());
}

TEST_CASE("malformed spec exits with status 2") {
  const fs::path dir = fresh_dir("badspec");
  write_file(dir / "spec.json", "{\"grid\": ");
  CHECK(run_tool("run --spec " + (dir / "spec.json").string()) == 2);
  write_file(dir / "typo.json", R"({"initial_data": {"type": "mode"}, "solvr": {}})");
  CHECK(run_tool("run --spec " + (dir / "typo.json").string()) == 2);
  CHECK(run_tool("run --spec " + (dir / "missing.json").string()) == 2);
}

TEST_CASE("verify re-checks an archived run and catches tampering") {
  const fs::path dir = fresh_dir("verify");
  const fs::path spec_path = dir / "spec.json";
  write_file(spec_path, kConservativeSpec);
  REQUIRE(run_tool("run --spec " + spec_path.string() + " --out " + dir.string()) == 0);

  CHECK(run_tool("verify --out " + dir.string()) == 0);

  // corrupt one M sample: the drift checks must notice on re-verification
  std::string csv = io::read_text(dir / "trajectory.csv");
  const auto pos = csv.rfind('\n', csv.size() - 2);
  std::string last = csv.substr(pos + 1);
  const auto comma = last.find(',');
  last = last.substr(0, comma + 1) + "99.0" + last.substr(last.find(',', comma + 1));
  io::write_text_atomic(dir / "trajectory.csv", csv.substr(0, pos + 1) + last);
  CHECK(run_tool("verify --out " + dir.string()) == 1);
}

TEST_CASE("sweep validates the amplitude list") {
  cli::RunSpec templ = cli::parse_run_spec(kConservativeSpec, "spec.json");
  CHECK_THROWS_AS(cli::cmd_sweep(templ, {1.0}, 1, "/tmp/dnls_sweep_invalid"),
                  cli::SpecError);
}

TEST_CASE("sweep runs the template per amplitude and writes the summary") {
  const fs::path dir = fresh_dir("sweep");
  const std::string spec = R"({
    "grid": {"n": 64},
    "initial_data": {"type": "mode", "k": 1, "amplitude": [1.0, 0.0]},
    "params": {"p": 3.0, "lambda": [1.0, 0.0]},
    "solver": {"dt_init": 1e-3, "t_max": 5.0, "sample_interval": 1e-3}
  })";
  write_file(dir / "spec.json", spec);

  CHECK(run_tool("sweep --spec " + (dir / "spec.json").string() +
                 " --amplitudes 1.0,2.0 --jobs 2 --out " + dir.string()) == 0);

  RecordedTrajectory dummy;
  const std::string csv = io::read_text(dir / "sweep_summary.csv");
  CHECK(csv.rfind("A,I_abs,bound_T0,t_detected,consistent\n", 0) == 0);

  // bound ratio must be exactly 4 : 1 at p = 3
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) cols.push_back(tok);
    rows.push_back(cols);
  }
  REQUIRE(rows.size() == 2);
  const double b1 = std::stod(rows[0][2]);
  const double b2 = std::stod(rows[1][2]);
  CHECK(b1 / b2 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rows[0][4] == "1");
  CHECK(rows[1][4] == "1");

  CHECK(run_tool("sweep --spec " + (dir / "spec.json").string() +
                 " --amplitudes 1.0 --out " + dir.string()) == 2);
}

TEST_CASE("plotdata emits the three series") {
  const fs::path dir = fresh_dir("plot");
  const std::string spec = R"({
    "grid": {"n": 64},
    "initial_data": {"type": "mode", "k": 1, "amplitude": [1.0, 0.0]},
    "params": {"p": 3.0, "lambda": [1.0, 0.0]},
    "solver": {"dt_init": 1e-3, "t_max": 5.0, "sample_interval": 1e-3}
  })";
  write_file(dir / "spec.json", spec);
  REQUIRE(run_tool("run --spec " + (dir / "spec.json").string() + " --out " + dir.string()) == 0);
  CHECK(run_tool("plotdata --out " + dir.string()) == 0);

  for (const char* name : {"series_M.dat", "series_bound.dat", "series_sup.dat"})
    CHECK(fs::exists(dir / name));

  // the bound series must not outlive its singular time
  const std::string bound = io::read_text(dir / "series_bound.dat");
  REQUIRE_FALSE(bound.empty());
  const auto last_line = bound.substr(bound.rfind('\n', bound.size() - 2) + 1);
  const double t_last = std::stod(last_line);
  CHECK(t_last <= kTwoPi * kTwoPi / 2);

  // missing inputs exit with 2
  const fs::path empty = fresh_dir("plot_empty");
  CHECK(run_tool("plotdata --out " + empty.string()) == 2);
  write_file(empty / "trajectory.csv", "t,M\n");
  write_file(empty / "runspec.json", "{}");
  CHECK(run_tool("plotdata --out " + empty.string()) == 2);
}

TEST_CASE("plotdata on a conservative run: constant M, empty bound series") {
  const fs::path dir = fresh_dir("plot_cons");
  write_file(dir / "spec.json", kConservativeSpec);
  REQUIRE(run_tool("run --spec " + (dir / "spec.json").string() + " --out " + dir.string()) == 0);
  REQUIRE(run_tool("plotdata --out " + dir.string()) == 0);

  std::istringstream is(io::read_text(dir / "series_M.dat"));
  double t = 0, m = 0, m0 = 0;
  bool first = true;
  double scale = 0, drift = 0;
  while (is >> t >> m) {
    if (first) m0 = m;
    first = false;
    scale = std::max(scale, std::abs(m));
    drift = std::max(drift, std::abs(m - m0));
  }
  CHECK_FALSE(first);
  CHECK(drift <= 1e-8 * std::max(scale, 1e-300));

  // no positive drive: the comparison bound is undefined
  CHECK(io::read_text(dir / "series_bound.dat").empty());
}

TEST_CASE("sweep output is byte-deterministic") {
  const fs::path dir_a = fresh_dir("sweep_det_a");
  const fs::path dir_b = fresh_dir("sweep_det_b");
  const std::string spec = R"({
    "grid": {"n": 64},
    "initial_data": {"type": "mode", "k": 1, "amplitude": [1.0, 0.0]},
    "params": {"p": 3.0, "lambda": [1.0, 0.0]},
    "solver": {"dt_init": 1e-3, "t_max": 5.0, "sample_interval": 1e-3}
  })";
  write_file(dir_a / "spec.json", spec);
  REQUIRE(run_tool("sweep --spec " + (dir_a / "spec.json").string() +
                   " --amplitudes 0.9,1.1 --jobs 2 --out " + dir_a.string()) == 0);
  REQUIRE(run_tool("sweep --spec " + (dir_a / "spec.json").string() +
                   " --amplitudes 0.9,1.1 --jobs 2 --out " + dir_b.string()) == 0);
  CHECK(io::read_text(dir_a / "sweep_summary.csv") ==
        io::read_text(dir_b / "sweep_summary.csv"));
}
