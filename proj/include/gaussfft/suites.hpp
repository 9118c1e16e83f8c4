#pragma once

// Batch runner: parses a JSON run configuration, executes the rotation,
// transform and algebra suites, and writes CSV reports.
//
// Config keys: suite, T, N, n, seed, rotation, transform, algebra (see
// configs/default.json for every case kind).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gaussfft {

struct RunConfig {
  std::string suite = "all";  // rotation | transform | algebra | all
  double T = 1.0;
  std::size_t N = 1024;
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  nlohmann::json rotation = nlohmann::json::array();
  nlohmann::json transform = nlohmann::json::array();
  nlohmann::json algebra = nlohmann::json::array();
  std::filesystem::path base_dir;  // relative CSV weights resolve here

  // Throws ConfigError on unknown keys or malformed values.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);
};

struct ReportRow {
  std::string suite;
  std::string case_id;
  std::string metric;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunOptions {
  std::filesystem::path out_dir;  // empty: no files written
  unsigned workers = 1;
  std::optional<std::string> suite;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  std::vector<ReportRow> rows;
  int status = 0;  // 0 all rows pass, 1 otherwise
};

// Validates every case before computing anything (ConfigError), then runs
// the selected suites. Writes report.csv, summary.txt and one CSV per suite.
RunResult run(const RunConfig& config, const RunOptions& opts = {});

// Shortest round-trip decimal form; used for every number in the reports.
std::string format_number(double x);

}  // namespace gaussfft
