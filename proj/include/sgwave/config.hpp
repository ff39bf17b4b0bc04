#pragma once

// JSON run configuration (schema: docs/config.schema.json).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sgwave/estimates.hpp"
#include "sgwave/galerkin_solver.hpp"

namespace sgwave {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MonitorConfig {
  MonitorOptions options;
  double k = 2.0;
  std::optional<double> delta;
};

struct VerifyConfig {
  int samples = 1000;
  std::uint64_t seed = 0;
  bool override_failures = false;
};

struct OutputConfig {
  std::string csv_path = "trajectory.csv";
  std::string report_path = "report.json";
};

struct RunConfig {
  ProblemDefinition problem;
  int modes = 8;
  SolverConfig time;
  MonitorConfig monitors;
  VerifyConfig verify;
  OutputConfig output;
};

/// Throws ConfigError with a path-qualified message on any schema violation.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Environment variable that relocates relative output paths.
inline constexpr const char* kOutputDirEnv = "SGWAVE_OUTPUT_DIR";
std::filesystem::path resolve_output_path(const std::string& path);

}  // namespace sgwave
