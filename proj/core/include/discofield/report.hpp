#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "discofield/config.hpp"
#include "discofield/version.hpp"

namespace discofield {

/// One verification row. `pass` is explicit because some checks are lower
/// bounds (ids ending in _floor) and some are purely informational
/// (tolerance < 0, always pass).
struct CheckRow {
  std::string id;
  std::string eq_ref;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

CheckRow bounded(std::string id, std::string eq_ref, double value, double tol);
CheckRow floored(std::string id, std::string eq_ref, double value, double floor);
CheckRow informational(std::string id, std::string eq_ref, double value);

struct RunReport {
  std::string command;
  RunConfig config;
  std::vector<CheckRow> checks;
  double wall_seconds = 0.0;  // console/timing sidecar only, never report bytes
  std::string version = kVersion;
  bool computation_error = false;

  bool all_pass() const;
};

/// %.17g, locale-independent; round-trips every double.
std::string format_float(double v);

/// Closed vocabulary of identity tags a check row may reference
/// (see docs/equations.md).
const std::vector<std::string>& equation_registry();
bool eq_ref_known(const std::string& eq_ref);

/// Canonical JSON echo of a validated config: fixed key order, every default
/// materialized, floats at 17 significant digits. Byte-stable.
std::string canonical_config_json(const RunConfig& cfg, int indent = 0);

/// Deterministic serializations; wall time is deliberately absent.
std::string report_json(const RunReport& report);
std::string report_csv(const RunReport& report);

/// Writes <command>.report.json, <command>.checks.csv and the
/// non-deterministic <command>.timing.txt sidecar.
void write_report_files(const RunReport& report,
                        const std::filesystem::path& out_dir);

}  // namespace discofield
