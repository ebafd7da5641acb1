#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fockbench/fields.hpp"
#include "fockbench/measures.hpp"
#include "fockbench/transport.hpp"

namespace fockbench::cli {

/// Invalid or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Preset { gauss_free, poisson_grid, poisson_gausskernel, poisson_derivative, custom };

std::string to_string(Preset preset);

/// Uniform grid on [-L, L] with `points` nodes; node weights equal the spacing.
struct Grid {
  std::vector<double> x;

  static Grid uniform(double half_width, int points);
  int size() const { return static_cast<int>(x.size()); }
  /// Quadrature weight of each node: forward spacing, the last node reusing
  /// the previous one.
  std::vector<double> weights() const;
};

/// K = diag(exp(-x_i^2/2)) · D in orthonormal grid coordinates, where D is the
/// forward difference with zero right boundary value:
/// (Df)_i = (f_{i+1} - f_i)/h_i and f_{d+1} := 0.
Embedding build_derivative_embedding(const Grid& grid);

struct Tolerances {
  double moment = 1e-10;
  double transport = 1e-9;
  double conjugation = 1e-10;
  double commutator = 1e-12;
  double regularity = 1e-10;
  double parseval = 1e-9;
  double eigen = 1e-8;
  double chaos = 1e-8;
  double unitarity = 1e-12;
  /// Monte Carlo checks pass within this many standard errors.
  double mc_standard_errors = 5.0;
};

enum class OutputFormat { json, csv };

struct ExperimentConfig {
  Preset preset = Preset::gauss_free;
  MeasureKind field = MeasureKind::gaussian;
  int dim = 1;
  int cutoff = 10;
  std::optional<Grid> grid;
  std::vector<double> weights;
  /// Description of how K was given, echoed into the report.
  std::string k_description = "identity";
  Matrix k;
  std::vector<std::string> suites = {"all"};
  long mc_samples = 1'000'000;
  std::uint64_t seed = 42;
  int probes = 20;
  int charfun_probes = 50;
  int eigen_points = 10;
  int chaos_degree = 2;
  Tolerances tol;
  std::filesystem::path output_path = "fockbench-out";
  OutputFormat format = OutputFormat::csv;
  nlohmann::json source;

  FieldSpec field_spec() const;
  MeasureModel measure() const;
  /// Throws ConfigError when K is not injective.
  Embedding embedding() const;
};

inline const std::vector<std::string> kSuiteNames = {"validate",  "moments", "charfun",
                                                     "transport", "chaos",   "eigencheck"};

/// Validates the document and applies preset defaults. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace fockbench::cli
