#pragma once

// Subcommands behind the sgwave executable. Each returns an exit code and
// writes its JSON document to `out`; diagnostics go to `err`.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgwave/config.hpp"
#include "sgwave/estimates.hpp"
#include "sgwave/oracle.hpp"

namespace sgwave {

enum ExitCode : int {
  kExitPass = 0,
  kExitFailure = 1,    // falsified condition or monitor violation
  kExitDivergence = 2,
  kExitConfigError = 3,
};

/// Poincare check, verify_conditions and verify_g at the configured resolution.
ConditionReport verify_problem(const RunConfig& cfg);

struct RunOutcome {
  ConditionReport verification;
  Trajectory trajectory;
  GronwallParams gronwall;
  std::optional<DecayParams> decay;
  MonitorReport monitors;
  ProjectedInitialData projection;
};

/// Projects, integrates and monitors without touching the filesystem.
/// Decay params are attached when forcing is Zero and the kind has a c0.
RunOutcome execute_run(const RunConfig& cfg);

std::string trajectory_csv(const RunOutcome& outcome);
nlohmann::json run_report(const RunOutcome& outcome);

/// Writes `content` to `path` via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct ConvergeOptions {
  std::vector<int> modes;
  std::vector<double> dts;
  std::optional<int> m_ref;      // default 2 max(modes)
  std::optional<double> dt_ref;  // default min(dts) / 10
  std::optional<std::string> csv_path;
  double noise_floor = 1e-12;
};

struct ConvergeRow {
  int modes = 0;
  double dt = 0.0;
  double error = 0.0;
  bool diverged = false;
};

struct ConvergeStudy {
  int m_ref = 0;
  double dt_ref = 0.0;
  std::vector<ConvergeRow> rows;
  bool monotone = true;
  bool diverged = false;
  nlohmann::json to_json() const;
};

/// Throws ConfigError on empty or non-ascending lists.
ConvergeStudy converge_study(const RunConfig& cfg, const ConvergeOptions& options);

struct DecayStudy {
  RunOutcome run;
  double sup_By_norm_sq = 0.0;
  double tail_sup_By_norm_sq = 0.0;  // over the last fifth of [0, T]
  double radius = 0.0;
  bool contained = false;
  bool within_radius = false;
  nlohmann::json to_json() const;
};

/// Throws ConfigError unless forcing is Zero and the kind has p > 2 with a c0.
DecayStudy decay_study(const RunConfig& cfg, std::optional<double> T = std::nullopt);

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_converge(const RunConfig& cfg, const ConvergeOptions& options, std::ostream& out,
                 std::ostream& err);
int cmd_decay(const RunConfig& cfg, std::optional<double> T, std::ostream& out, std::ostream& err);

}  // namespace sgwave
