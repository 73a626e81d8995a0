#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cliff::battery {

struct BatteryConfig {
  std::vector<int> ns = {3, 5, 7};
  std::uint64_t seed = 2024;
  double tol_scale = 1.0;
  int nodes = 256;
  std::vector<std::string> check_globs;  // empty = all checks
  std::string out_path;                  // empty = stdout only
  std::string format = "json";           // json | csv
};

struct CheckResult {
  std::string id;
  std::string anchor;  // stable identity name, one per check id
  int n = 0;
  std::string params;
  double defect = 0.0;
  double tol = 0.0;
  std::string status;  // pass | fail | skip
  double wall_ms = 0.0;
};

struct CheckInfo {
  std::string id;
  std::string anchor;
  std::vector<int> ns;  // which n the check runs for
};

/// All registered check ids with anchors.
std::vector<CheckInfo> list_checks();

/// True if the id survives the config's glob filters ('*' wildcards).
bool glob_match(const std::string& pattern, const std::string& id);

struct BatteryOutcome {
  std::vector<CheckResult> results;
  int exit_code = 0;  // 0 pass, 1 any fail
};

/// Runs the selected checks over the configured n values in a worker pool;
/// results are deterministic for a fixed seed and ordered by (id, n).
BatteryOutcome run_battery(const BatteryConfig& config);

std::string report_json(const BatteryOutcome& outcome, const BatteryConfig& config,
                        bool with_timestamp = true);
std::string report_csv(const BatteryOutcome& outcome);

}  // namespace cliff::battery
