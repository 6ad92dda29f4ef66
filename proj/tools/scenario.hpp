#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qrf/modular.hpp"

namespace qrflab {

using json = nlohmann::ordered_json;

/// Malformed or inconsistent scenario. The message names the offending block.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  std::optional<double> tolerance;    // overrides every default check tolerance
  qrf::KmsSign kms_sign = qrf::KmsSign::paper;
  bool verbose = false;
};

struct CsvTable {
  std::string name;  // file suffix, e.g. "verdicts"
  std::string content;
};

struct RunResult {
  json report;
  int exit_code = 0;  // 0 all checks pass, 1 some check failed
  std::vector<CsvTable> tables;
};

/// Runs every task in order. Throws ConfigError for unresolved references,
/// unknown operations, malformed literals and dimension mismatches.
RunResult run_scenario(const json& config, const RunOptions& options, const std::string& scenario_name = "scenario");
RunResult run_scenario_file(const std::filesystem::path& path, const RunOptions& options);

/// Writes <dir>/<stem>.report.json and, when requested, <dir>/<stem>.<table>.csv.
std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& dir,
                                                 const std::string& stem, bool csv);

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Report with every "elapsed_ms" field removed (the only timing data).
json strip_timing(json report);

/// Canonical report text: two-space indented JSON with a trailing newline.
std::string report_text(const json& report);

inline constexpr const char* kScenarioVersion = "qrflab/1";

}  // namespace qrflab
