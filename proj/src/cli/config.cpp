#include "fockbench/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fockbench/cli/expression.hpp"
#include "fockbench/errors.hpp"

namespace fockbench::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxFockDimension = 2000;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) {
    return fallback;
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

Preset parse_preset(const std::string& name) {
  if (name == "gauss-free") return Preset::gauss_free;
  if (name == "poisson-grid") return Preset::poisson_grid;
  if (name == "poisson-gausskernel") return Preset::poisson_gausskernel;
  if (name == "poisson-derivative") return Preset::poisson_derivative;
  if (name == "custom") return Preset::custom;
  throw ConfigError("unknown preset '" + name + "'");
}

Matrix diag_from_expression(const std::string& source, const Grid& grid) {
  try {
    const Expression expr(source);
    Vector values(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      values[i] = expr(grid.x[static_cast<std::size_t>(i)]);
    }
    return values.asDiagonal();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("K.expr: ") + e.what());
  }
}

Matrix parse_k(const json& spec, const ExperimentConfig& cfg) {
  if (!spec.is_object() || !spec.contains("type")) {
    throw ConfigError("K must be an object with a 'type' field");
  }
  const auto type = get_or<std::string>(spec, "type", "", "K");
  const int d = cfg.dim;
  if (type == "identity") {
    check_keys(spec, {"type"}, "K");
    return Matrix::Identity(d, d);
  }
  if (type == "matrix") {
    check_keys(spec, {"type", "data"}, "K");
    const auto rows = get_or<std::vector<std::vector<double>>>(spec, "data", {}, "K");
    if (static_cast<int>(rows.size()) != d) {
      throw ConfigError("K.data must have " + std::to_string(d) + " rows");
    }
    Matrix k(d, d);
    for (int r = 0; r < d; ++r) {
      if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != d) {
        throw ConfigError("K.data must be square (rectangular K is not supported)");
      }
      for (int c = 0; c < d; ++c) {
        k(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      }
    }
    return k;
  }
  if (type == "diag") {
    check_keys(spec, {"type", "values"}, "K");
    const auto values = get_or<std::vector<double>>(spec, "values", {}, "K");
    if (static_cast<int>(values.size()) != d) {
      throw ConfigError("K.values must have " + std::to_string(d) + " entries");
    }
    return Eigen::Map<const Vector>(values.data(), d).asDiagonal();
  }
  if (type == "diag-expression") {
    check_keys(spec, {"type", "expr"}, "K");
    if (!cfg.grid) {
      throw ConfigError("K type 'diag-expression' needs a grid");
    }
    return diag_from_expression(get_or<std::string>(spec, "expr", "", "K"), *cfg.grid);
  }
  if (type == "derivative") {
    check_keys(spec, {"type"}, "K");
    if (!cfg.grid) {
      throw ConfigError("K type 'derivative' needs a grid");
    }
    try {
      return build_derivative_embedding(*cfg.grid).matrix();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("K: ") + e.what());
    }
  }
  throw ConfigError("unknown K type '" + type + "'");
}

}  // namespace

std::string to_string(Preset preset) {
  switch (preset) {
    case Preset::gauss_free:
      return "gauss-free";
    case Preset::poisson_grid:
      return "poisson-grid";
    case Preset::poisson_gausskernel:
      return "poisson-gausskernel";
    case Preset::poisson_derivative:
      return "poisson-derivative";
    case Preset::custom:
      return "custom";
  }
  return "custom";
}

Grid Grid::uniform(double half_width, int points) {
  if (points < 2 || !(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("grid needs at least 2 points and a positive half-width");
  }
  Grid grid;
  const double h = 2.0 * half_width / (points - 1);
  for (int i = 0; i < points; ++i) {
    grid.x.push_back(-half_width + i * h);
  }
  return grid;
}

std::vector<double> Grid::weights() const {
  std::vector<double> w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w.push_back(i + 1 < x.size() ? x[i + 1] - x[i] : x[i] - x[i - 1]);
  }
  return w;
}

Embedding build_derivative_embedding(const Grid& grid) {
  const int d = grid.size();
  if (d < 2) {
    throw std::invalid_argument("derivative embedding: grid needs at least 2 points");
  }
  for (int i = 0; i + 1 < d; ++i) {
    if (!(grid.x[static_cast<std::size_t>(i) + 1] > grid.x[static_cast<std::size_t>(i)])) {
      throw std::invalid_argument("derivative embedding: grid points must be strictly increasing");
    }
  }
  const auto w = grid.weights();
  Matrix diff = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double h = w[static_cast<std::size_t>(i)];
    diff(i, i) = -1.0 / h;
    if (i + 1 < d) {
      diff(i, i + 1) = 1.0 / h;
    }
  }
  Vector kappa(d);
  Vector sqrt_w(d);
  for (int i = 0; i < d; ++i) {
    const double x = grid.x[static_cast<std::size_t>(i)];
    kappa[i] = std::exp(-0.5 * x * x);
    sqrt_w[i] = std::sqrt(w[static_cast<std::size_t>(i)]);
  }
  // function values -> orthonormal coordinates u_i = sqrt(w_i) f(x_i)
  const Matrix k = sqrt_w.cwiseProduct(kappa).asDiagonal() * diff * sqrt_w.cwiseInverse().asDiagonal();
  return Embedding(k);
}

FieldSpec ExperimentConfig::field_spec() const {
  return field == MeasureKind::gaussian ? gaussian_field(dim) : poisson_field(weights);
}

MeasureModel ExperimentConfig::measure() const {
  return field == MeasureKind::gaussian ? MeasureModel::gaussian(dim, seed)
                                        : MeasureModel::poisson(weights, seed);
}

Embedding ExperimentConfig::embedding() const {
  try {
    return Embedding(k);
  } catch (const SingularError& e) {
    Eigen::JacobiSVD<Matrix> svd(k);
    std::ostringstream msg;
    msg << "K is not injective: " << e.what() << "; singular values [";
    const auto& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      msg << (i ? ", " : "") << s[i];
    }
    msg << "]";
    throw ConfigError(msg.str());
  } catch (const DimensionError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  check_keys(doc,
             {"preset", "d", "cutoff", "grid", "field", "weights", "K", "suites", "mc", "probes",
              "charfun_probes", "eigen_points", "chaos_degree", "tolerances", "output"},
             "config");
  ExperimentConfig cfg;
  cfg.source = doc;
  if (!doc.contains("preset")) {
    throw ConfigError("config.preset is required");
  }
  cfg.preset = parse_preset(get_or<std::string>(doc, "preset", "", "config"));

  const bool grid_preset = cfg.preset == Preset::poisson_grid ||
                           cfg.preset == Preset::poisson_gausskernel ||
                           cfg.preset == Preset::poisson_derivative;
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    check_keys(g, {"L", "points"}, "grid");
    try {
      cfg.grid = Grid::uniform(get_or<double>(g, "L", 3.0, "grid"), get_or<int>(g, "points", 8, "grid"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  } else if (grid_preset) {
    cfg.grid = Grid::uniform(3.0, 8);
  }

  // field and dimension
  switch (cfg.preset) {
    case Preset::gauss_free:
      cfg.field = MeasureKind::gaussian;
      break;
    case Preset::custom: {
      const auto name = get_or<std::string>(doc, "field", "gaussian", "config");
      if (name == "gaussian") {
        cfg.field = MeasureKind::gaussian;
      } else if (name == "poisson") {
        cfg.field = MeasureKind::poisson;
      } else {
        throw ConfigError("field must be 'gaussian' or 'poisson'");
      }
      break;
    }
    default:
      cfg.field = MeasureKind::poisson;
  }
  if (cfg.grid) {
    cfg.dim = cfg.grid->size();
    if (doc.contains("d") && get_or<int>(doc, "d", 0, "config") != cfg.dim) {
      throw ConfigError("d disagrees with grid.points");
    }
  } else {
    cfg.dim = get_or<int>(doc, "d", 1, "config");
  }
  if (cfg.dim < 1) {
    throw ConfigError("d must be >= 1");
  }
  if (doc.contains("cutoff")) {
    cfg.cutoff = get_or<int>(doc, "cutoff", 10, "config");
  } else {
    // largest cutoff ≤ 10 that fits dense storage
    cfg.cutoff = 10;
    while (cfg.cutoff > 1 && fock_dimension(cfg.dim, cfg.cutoff) > kMaxFockDimension) {
      --cfg.cutoff;
    }
  }
  if (cfg.cutoff < 1) {
    throw ConfigError("cutoff must be >= 1");
  }
  if (fock_dimension(cfg.dim, cfg.cutoff) > kMaxFockDimension) {
    throw ConfigError("Fock dimension C(N+d, d) = " + std::to_string(fock_dimension(cfg.dim, cfg.cutoff)) +
                      " exceeds the dense-storage limit " + std::to_string(kMaxFockDimension));
  }
  if (cfg.field == MeasureKind::poisson) {
    if (doc.contains("weights")) {
      cfg.weights = get_or<std::vector<double>>(doc, "weights", {}, "config");
      if (static_cast<int>(cfg.weights.size()) != cfg.dim) {
        throw ConfigError("weights must have d entries");
      }
      for (double w : cfg.weights) {
        if (!(w > 0.0)) {
          throw ConfigError("weights must be positive");
        }
      }
    } else if (cfg.grid) {
      cfg.weights = cfg.grid->weights();
    } else {
      cfg.weights.assign(static_cast<std::size_t>(cfg.dim), 1.0);
    }
  } else if (doc.contains("weights")) {
    throw ConfigError("weights only apply to the poisson field");
  }

  // embedding
  json k_spec = {{"type", "identity"}};
  if (cfg.preset == Preset::poisson_gausskernel) {
    k_spec = {{"type", "diag-expression"}, {"expr", "exp(-x^2)"}};
  } else if (cfg.preset == Preset::poisson_derivative) {
    k_spec = {{"type", "derivative"}};
  }
  if (doc.contains("K")) {
    k_spec = doc.at("K");
  }
  cfg.k = parse_k(k_spec, cfg);
  cfg.k_description = k_spec.dump();
  (void)cfg.embedding();  // injectivity is verified at load

  // suites
  if (doc.contains("suites")) {
    const json& s = doc.at("suites");
    std::vector<std::string> names;
    if (s.is_string()) {
      names.push_back(s.get<std::string>());
    } else if (s.is_array()) {
      names = get_or<std::vector<std::string>>(doc, "suites", {}, "config");
    } else {
      throw ConfigError("suites must be a string or an array of strings");
    }
    for (const auto& n : names) {
      if (n != "all" && std::find(kSuiteNames.begin(), kSuiteNames.end(), n) == kSuiteNames.end()) {
        throw ConfigError("unknown suite '" + n + "'");
      }
    }
    if (names.empty()) {
      throw ConfigError("suites must not be empty");
    }
    cfg.suites = names;
  }

  if (doc.contains("mc")) {
    const json& mc = doc.at("mc");
    check_keys(mc, {"samples", "seed"}, "mc");
    cfg.mc_samples = get_or<long>(mc, "samples", cfg.mc_samples, "mc");
    cfg.seed = get_or<std::uint64_t>(mc, "seed", cfg.seed, "mc");
    if (cfg.mc_samples < 2) {
      throw ConfigError("mc.samples must be >= 2");
    }
  }
  cfg.probes = get_or<int>(doc, "probes", cfg.probes, "config");
  cfg.charfun_probes = get_or<int>(doc, "charfun_probes", cfg.charfun_probes, "config");
  cfg.eigen_points = get_or<int>(doc, "eigen_points", cfg.eigen_points, "config");
  cfg.chaos_degree = get_or<int>(doc, "chaos_degree", cfg.dim <= 3 ? 5 : 2, "config");
  if (cfg.probes < 1 || cfg.charfun_probes < 1 || cfg.eigen_points < 1 || cfg.chaos_degree < 0) {
    throw ConfigError("probe counts must be positive and chaos_degree non-negative");
  }

  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    check_keys(t,
               {"moment", "transport", "conjugation", "commutator", "regularity", "parseval",
                "eigen", "chaos", "unitarity", "mc_standard_errors"},
               "tolerances");
    auto& tol = cfg.tol;
    tol.moment = get_or<double>(t, "moment", tol.moment, "tolerances");
    tol.transport = get_or<double>(t, "transport", tol.transport, "tolerances");
    tol.conjugation = get_or<double>(t, "conjugation", tol.conjugation, "tolerances");
    tol.commutator = get_or<double>(t, "commutator", tol.commutator, "tolerances");
    tol.regularity = get_or<double>(t, "regularity", tol.regularity, "tolerances");
    tol.parseval = get_or<double>(t, "parseval", tol.parseval, "tolerances");
    tol.eigen = get_or<double>(t, "eigen", tol.eigen, "tolerances");
    tol.chaos = get_or<double>(t, "chaos", tol.chaos, "tolerances");
    tol.unitarity = get_or<double>(t, "unitarity", tol.unitarity, "tolerances");
    tol.mc_standard_errors = get_or<double>(t, "mc_standard_errors", tol.mc_standard_errors, "tolerances");
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, {"path", "format"}, "output");
    cfg.output_path = get_or<std::string>(o, "path", cfg.output_path.string(), "output");
    const auto fmt = get_or<std::string>(o, "format", "csv", "output");
    if (fmt == "json") {
      cfg.format = OutputFormat::json;
    } else if (fmt == "csv") {
      cfg.format = OutputFormat::csv;
    } else {
      throw ConfigError("output.format must be 'json' or 'csv'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace fockbench::cli
