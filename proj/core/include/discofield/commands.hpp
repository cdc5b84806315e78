#pragma once

#include "discofield/report.hpp"

namespace discofield {

/// verify-hermite, spectrum-1d, verify-algebra, constraint, resonance,
/// scalar-residual, factorization, fermion-svd, baselines, all.
const std::vector<std::string>& command_names();
bool is_command(const std::string& name);

/// Runs one command's check suite (no file IO). Module errors are folded
/// into the report as a failing computation_error row.
RunReport dispatch(const std::string& command, const RunConfig& cfg);

/// Dispatch + write report files (+ per-subcommand files for `all`) into
/// `out_override` when given, else cfg.resolved_output_dir(). The override
/// is a runtime destination only and never enters the report bytes.
/// Prints one summary line per command.
/// Exit code: 0 all checks pass, 1 a check failed, 2 computation error.
int run_command(const std::string& command, const RunConfig& cfg,
                const std::string& out_override = "");

}  // namespace discofield
