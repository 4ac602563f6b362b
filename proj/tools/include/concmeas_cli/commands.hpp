#pragma once

/// Commands of the `concmeas` tool. Each writes its artifacts into `out_dir`
/// (created when missing) and throws ConfigError or NumericError on failure.

#include <filesystem>
#include <string>
#include <vector>

#include "concmeas_cli/config.hpp"

namespace concmeas::cli {

/// eigenvalues.csv (k, lambda, parity) and psi_<k>.csv (x, psi) on the full line.
void cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// density_k<k>.csv, limit_density.csv (x, density) and convergence.json.
void cmd_measure(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// zeros.csv (k, epsilon, ratio, limit).
void cmd_zeros(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// asymptotics.json: per eigenvalue J_K, J_W, kappa, C, the envelope
/// residual sup and the eigenvalue asymptotics residual.
void cmd_asymptotics(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// freud.json: per-alpha convergence reports, orthonormality drift, growth
/// slope and the cross-alpha spread.
void cmd_orthopoly(const RunConfig& cfg, const std::filesystem::path& out_dir);

const std::vector<std::string>& command_names();

/// Dispatch by name; throws ConfigError for an unknown command or one that
/// contradicts experiment.command.
void run_command(const std::string& command, const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Full command-line entry point. Exit codes: 0 success, 1 numeric failure,
/// 2 configuration or usage error.
int run_cli(int argc, char** argv);

}  // namespace concmeas::cli
