#include "dnls/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dnls::io {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("csv: bad number '" + s + "'");
  return v;
}

}  // namespace

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

nlohmann::ordered_json field_to_json(const Field& f) {
  nlohmann::ordered_json j;
  j["n"] = f.size();
  auto modes = nlohmann::ordered_json::array();
  for (int i = 0; i < f.size(); ++i) {
    const Complex c = f.coefficients()[i];
    if (c != Complex(0, 0))
      modes.push_back({f.grid().wavenumbers[i], c.real(), c.imag()});
  }
  j["coefficients"] = std::move(modes);
  return j;
}

Field field_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const TorusGrid grid = make_grid(n);
  std::vector<Complex> coeffs(n, Complex(0, 0));
  for (const auto& entry : j.at("coefficients")) {
    if (!entry.is_array() || entry.size() != 3)
      throw std::runtime_error("field: coefficient entries must be [k, re, im]");
    const int k = entry[0].get<int>();
    if (k < grid.min_wavenumber() || k > grid.max_wavenumber())
      throw std::runtime_error("field: wavenumber " + std::to_string(k) + " out of band");
    coeffs[grid.index_of(k)] = Complex(entry[1].get<double>(), entry[2].get<double>());
  }
  return Field::from_coefficients(grid, std::move(coeffs));
}

std::string trajectory_to_csv(const RecordedTrajectory& rt) {
  std::ostringstream os;
  os << kTrajectoryCsvHeader << '\n';
  for (std::size_t i = 0; i < rt.size(); ++i) {
    os << g17(rt.t[i]) << ',' << g17(rt.M[i]) << ',' << g17(rt.total_density_abs[i])
       << ',' << g17(rt.l2[i]) << ',' << g17(rt.lp1[i]) << ',' << g17(rt.sup[i]) << '\n';
  }
  return os.str();
}

void trajectory_from_csv(const std::string& text, RecordedTrajectory& rt) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kTrajectoryCsvHeader)
    throw std::runtime_error("csv: missing or wrong header, expected '" +
                             std::string(kTrajectoryCsvHeader) + "'");
  rt.t.clear();
  rt.M.clear();
  rt.total_density_abs.clear();
  rt.l2.clear();
  rt.lp1.clear();
  rt.sup.clear();
  rt.l1.clear();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 6) throw std::runtime_error("csv: expected 6 columns");
    rt.t.push_back(parse_double(cols[0]));
    rt.M.push_back(parse_double(cols[1]));
    rt.total_density_abs.push_back(parse_double(cols[2]));
    rt.l2.push_back(parse_double(cols[3]));
    rt.lp1.push_back(parse_double(cols[4]));
    rt.sup.push_back(parse_double(cols[5]));
  }
  if (rt.t.empty()) throw std::runtime_error("csv: no data rows");
}

nlohmann::ordered_json report_to_json(const BlowupReport& r) {
  nlohmann::ordered_json j;
  j["detected"] = r.detected;
  j["t_detected"] = r.t_detected ? nlohmann::ordered_json(*r.t_detected)
                                 : nlohmann::ordered_json(nullptr);
  j["trigger"] = to_string(r.trigger);
  j["bound_T0"] = r.bound_T0 ? nlohmann::ordered_json(*r.bound_T0)
                             : nlohmann::ordered_json(nullptr);
  j["verdict"] = to_string(r.verdict);
  j["diagnostics"] = {{"pairing_integral_abs", r.pairing_integral_abs},
                      {"last_time", r.last_time},
                      {"sample_count", r.sample_count},
                      {"resolved_sample_count", r.resolved_sample_count}};
  if (r.gauge_wrap_mismatch)
    j["diagnostics"]["gauge_wrap_mismatch"] = *r.gauge_wrap_mismatch;
  return j;
}

BlowupReport report_from_json(const nlohmann::json& j) {
  BlowupReport r;
  r.detected = j.at("detected").get<bool>();
  if (!j.at("t_detected").is_null()) r.t_detected = j.at("t_detected").get<double>();
  if (!j.at("bound_T0").is_null()) r.bound_T0 = j.at("bound_T0").get<double>();
  const std::string trig = j.at("trigger").get<std::string>();
  for (auto t : {BlowupTrigger::sup_threshold, BlowupTrigger::dt_floor,
                 BlowupTrigger::nonfinite_value, BlowupTrigger::t_max_reached})
    if (trig == to_string(t)) r.trigger = t;
  const std::string verd = j.at("verdict").get<std::string>();
  for (auto v : {BlowupVerdict::consistent, BlowupVerdict::bound_violated,
                 BlowupVerdict::no_blowup_expected, BlowupVerdict::inconclusive})
    if (verd == to_string(v)) r.verdict = v;
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    r.pairing_integral_abs = d.value("pairing_integral_abs", 0.0);
    r.last_time = d.value("last_time", 0.0);
    r.sample_count = d.value("sample_count", std::size_t{0});
    r.resolved_sample_count = d.value("resolved_sample_count", std::size_t{0});
    if (d.contains("gauge_wrap_mismatch"))
      r.gauge_wrap_mismatch = d.at("gauge_wrap_mismatch").get<double>();
  }
  return r;
}

nlohmann::ordered_json checks_to_json(const std::vector<CheckResult>& checks) {
  nlohmann::ordered_json j;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["max_violation"] = c.max_violation;
    e["tolerance"] = c.tolerance;
    e["passed"] = c.passed;
    e["worst_time"] = c.worst_time ? nlohmann::ordered_json(*c.worst_time)
                                   : nlohmann::ordered_json(nullptr);
    e["applicable"] = c.applicable;
    if (!c.note.empty()) e["note"] = c.note;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  j["all_passed"] = all_passed(checks);
  return j;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace dnls::io
