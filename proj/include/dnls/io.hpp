#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnls/field.hpp"
#include "dnls/solver.hpp"
#include "dnls/verify.hpp"

namespace dnls::io {

// fixed 17-significant-digit printing used by the CSV formats
std::string g17(double x);

// {"n": int, "coefficients": [[k, re, im], ...]}, nonzero modes only
nlohmann::ordered_json field_to_json(const Field& f);
Field field_from_json(const nlohmann::json& j);

inline constexpr const char* kTrajectoryCsvHeader = "t,M,total_density_abs,l2,lp1,sup";

std::string trajectory_to_csv(const RecordedTrajectory& rt);
// Fills the series columns; params and resolved_prefix are the caller's job.
void trajectory_from_csv(const std::string& text, RecordedTrajectory& rt);

nlohmann::ordered_json report_to_json(const BlowupReport& r);
BlowupReport report_from_json(const nlohmann::json& j);

nlohmann::ordered_json checks_to_json(const std::vector<CheckResult>& checks);

void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace dnls::io
