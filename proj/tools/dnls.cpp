#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnls/cli.hpp"
#include "dnls/io.hpp"

namespace {

dnls::cli::RunSpec load_spec(const std::string& path) {
  if (path.empty()) return dnls::cli::headline_spec();
  return dnls::cli::parse_run_spec(dnls::io::read_text(path), path);
}

std::vector<double> parse_amplitudes(const std::string& csv) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t pos = csv.find(',', start);
    const std::string tok =
        csv.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral simulator for the periodic derivative NLS equation"};
  app.require_subcommand(1);

  std::string spec_path, out_dir, amplitudes_csv;
  int jobs = 0;

  CLI::App* run = app.add_subcommand("run", "Integrate one configuration and verify it");
  run->add_option("--spec", spec_path, "RunSpec JSON (defaults to the built-in preset)");
  run->add_option("--out", out_dir, "Output directory (overrides spec.outputs)");

  CLI::App* sweep = app.add_subcommand("sweep", "Amplitude sweep of a template spec");
  sweep->add_option("--spec", spec_path, "Template RunSpec JSON");
  sweep->add_option("--amplitudes", amplitudes_csv, "Comma-separated amplitude list")
      ->required();
  sweep->add_option("--jobs", jobs, "Parallel workers (default: hardware)");
  sweep->add_option("--out", out_dir, "Output directory");

  CLI::App* plotdata = app.add_subcommand("plotdata", "Emit plot-ready series from a run");
  plotdata->add_option("--out", out_dir, "Run directory to read and write")->required();

  CLI::App* verify = app.add_subcommand("verify", "Re-check an archived run directory");
  verify->add_option("--out", out_dir, "Run directory to re-check")->required();

  CLI11_PARSE(app, argc, argv);

  dnls::cli::RunSpec spec;
  std::vector<double> amplitudes;
  if (run->parsed() || sweep->parsed()) {
    // anything wrong with the inputs themselves is exit code 2
    try {
      spec = load_spec(spec_path);
      if (sweep->parsed()) amplitudes = parse_amplitudes(amplitudes_csv);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }

  try {
    if (run->parsed()) return dnls::cli::cmd_run(spec, out_dir);
    if (sweep->parsed()) return dnls::cli::cmd_sweep(spec, amplitudes, jobs, out_dir);
    if (plotdata->parsed()) return dnls::cli::cmd_plotdata(out_dir);
    if (verify->parsed()) return dnls::cli::cmd_verify(out_dir);
  } catch (const dnls::cli::SpecError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return run->parsed() || sweep->parsed() ? 1 : 2;
  }
  return 0;
}
