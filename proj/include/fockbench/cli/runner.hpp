#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fockbench/cli/config.hpp"

namespace fockbench::cli {

/// One checked identity: |lhs - rhs| = abs_err must not exceed tol. For
/// relative checks `tol` is already scaled to an absolute bound.
struct CheckRow {
  std::string identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckRow> rows;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const;
};

struct RunResult {
  std::vector<SuiteResult> suites;
  nlohmann::json report;
  int exit_code = 0;
};

/// Executes the configured suites. Never throws for numerical failures; they
/// become failed rows.
RunResult run(const ExperimentConfig& cfg);

/// Writes report.json and, for the csv format, one <suite>.csv per suite.
void write_outputs(const RunResult& result, const ExperimentConfig& cfg,
                   const std::filesystem::path& dir);

std::string to_csv(const SuiteResult& suite);

/// `fockbench run` end to end. Returns the process exit code: 0 when every
/// identity passes, 1 when any fails, 2 on configuration errors.
int run_command(const std::filesystem::path& config_path, const std::optional<std::string>& suite,
                const std::optional<std::uint64_t>& seed,
                const std::optional<std::filesystem::path>& out_dir, std::ostream& log);

/// Moments of ⟨ξ, φ⟩ under the preset measure from its cumulants:
/// gaussian κ_2 = ‖φ‖², poisson κ_k = Σ_i w_i (φ_i / sqrt(w_i))^k for k ≥ 2.
std::vector<double> cumulant_moment_oracle(MeasureKind kind, const std::vector<double>& weights,
                                           const Vector& phi, int max_order);

}  // namespace fockbench::cli
