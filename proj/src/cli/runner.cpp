#include "fockbench/cli/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "fockbench/chaos.hpp"
#include "fockbench/errors.hpp"
#include "fockbench/measures.hpp"
#include "fockbench/random.hpp"
#include "fockbench/spectral.hpp"
#include "fockbench/transport.hpp"

namespace fockbench::cli {

using nlohmann::json;

namespace {

// Substream ids for the probe generators of each suite; MC draws use 0..9.
constexpr std::uint64_t kValidateStream = 100;
constexpr std::uint64_t kMomentStream = 0;
constexpr std::uint64_t kCharfunStream = 1;
constexpr std::uint64_t kChaosStream = 2;
constexpr std::uint64_t kCharfunProbeStream = 101;
constexpr std::uint64_t kTransportProbeStream = 102;
constexpr std::uint64_t kChaosProbeStream = 103;
constexpr std::uint64_t kEigenProbeStream = 104;

class Table {
 public:
  explicit Table(SuiteResult& suite) : suite_(suite) {}

  void absolute(const std::string& identity, double lhs, double rhs, double tol) {
    push(identity, lhs, rhs, tol);
  }
  void relative(const std::string& identity, double lhs, double rhs, double rel_tol, double scale) {
    push(identity, lhs, rhs, rel_tol * scale);
  }
  /// A residual that must be at most tol.
  void residual(const std::string& identity, double value, double tol) { push(identity, value, 0.0, tol); }
  void failure(const std::string& identity, const std::string& message) {
    suite_.rows.push_back({identity + ": " + message, NAN, NAN, NAN, 0.0, false});
  }

 private:
  void push(const std::string& identity, double lhs, double rhs, double tol) {
    const double err = std::abs(lhs - rhs);
    suite_.rows.push_back({identity, lhs, rhs, err, tol, err <= tol});
  }
  SuiteResult& suite_;
};

Vector normal_vector(Xoshiro256& rng, int d) {
  std::normal_distribution<double> normal;
  Vector v(d);
  for (int i = 0; i < d; ++i) {
    v[i] = normal(rng);
  }
  return v;
}

/// Random f with ‖Kf‖ = 1.
Vector t_probe(Xoshiro256& rng, const Embedding& emb) {
  Vector g = normal_vector(rng, emb.dim());
  return g / (emb.matrix() * g).norm();
}

std::string idx(const std::string& base, long k) { return base + " #" + std::to_string(k); }


SuiteResult run_validate(const ExperimentConfig& cfg) {
  SuiteResult suite{"validate", {}, json::object()};
  Table table(suite);
  const FieldSpec field = cfg.field_spec();
  const int n_max = cfg.cutoff;

  const FieldReport rep = validate_field(field, n_max, cfg.tol.commutator, cfg.seed + kValidateStream, cfg.probes);
  table.residual("(a) max |J(phi) - J(phi)^T|", rep.max_asymmetry, cfg.tol.commutator);
  for (std::size_t k = 0; k < rep.commutator_norms.size(); ++k) {
    table.residual(idx("(c) ||[J(phi),J(psi)]|| on degrees <= N-2, pair", static_cast<long>(k)),
                   rep.commutator_norms[k], cfg.tol.commutator);
  }
  table.residual("(d) linearity residual of J in phi", rep.max_linearity_residual, std::max(cfg.tol.commutator, 1e-12));
  suite.details["a_block_norms"] = rep.a_norms;
  suite.details["b_block_norms"] = rep.b_norms;
  suite.details["v_condition_numbers"] = rep.v_condition_numbers;

  MixedProducts products(field, n_max);
  for (int n = 1; n <= n_max; ++n) {
    const Matrix top = regularity_top_block(products, n);
    const Matrix expected = std::sqrt(factorial(n)) * Matrix::Identity(top.rows(), top.cols());
    table.residual("(e) max |V_{" + std::to_string(n) + "," + std::to_string(n) + "} - sqrt(n!) Id|",
                   (top - expected).cwiseAbs().maxCoeff(), cfg.tol.regularity);
  }

  const Embedding emb = cfg.embedding();
  const FieldSpec conjugated = conjugated_field(field, emb);
  const FieldReport rep_k = validate_field(conjugated, n_max, cfg.tol.commutator, cfg.seed + kValidateStream + 1, cfg.probes);
  for (std::size_t k = 0; k < rep_k.commutator_norms.size(); ++k) {
    table.residual(idx("(c) ||[J_K(f),J_K(g)]|| on degrees <= N-2, pair", static_cast<long>(k)),
                   rep_k.commutator_norms[k], cfg.tol.commutator);
  }
  suite.details["conjugated_v_condition_numbers"] = rep_k.v_condition_numbers;
  return suite;
}

SuiteResult run_moments(const ExperimentConfig& cfg) {
  SuiteResult suite{"moments", {}, json::object()};
  Table table(suite);
  const FieldSpec field = cfg.field_spec();
  const Vector phi = Vector::Ones(cfg.dim);
  const auto oracle = cumulant_moment_oracle(cfg.field, cfg.weights, phi, cfg.cutoff);
  std::vector<double> operator_moments;
  for (int n = 1; n <= cfg.cutoff; ++n) {
    const double m = power_moment(field, phi, n, cfg.cutoff);
    operator_moments.push_back(m);
    table.relative("<J(1)^" + std::to_string(n) + " Omega, Omega> vs cumulant oracle", m,
                   oracle[static_cast<std::size_t>(n - 1)], cfg.tol.moment,
                   std::max(1.0, std::abs(oracle[static_cast<std::size_t>(n - 1)])));
  }
  const SampleBatch batch = sample(cfg.measure(), cfg.mc_samples, kMomentStream);
  const int mc_order = std::min(4, cfg.cutoff);
  const auto est = empirical_moments(batch, phi, mc_order);
  for (int n = 1; n <= mc_order; ++n) {
    const auto& e = est.moments[static_cast<std::size_t>(n - 1)];
    table.absolute("MC E<xi,1>^" + std::to_string(n) + " vs operator moment", e.value,
                   operator_moments[static_cast<std::size_t>(n - 1)],
                   cfg.tol.mc_standard_errors * e.standard_error);
  }
  return suite;
}

SuiteResult run_charfun(const ExperimentConfig& cfg) {
  SuiteResult suite{"charfun", {}, json::object()};
  Table table(suite);
  const MeasureModel model = cfg.measure();
  const Embedding emb = cfg.embedding();
  auto rng = Xoshiro256::substream(cfg.seed, kCharfunProbeStream);
  std::uniform_real_distribution<double> radius(0.1, 2.0);

  table.absolute("rho^(0) = 1", std::abs(charfun_closed(model, Vector::Zero(cfg.dim))), 1.0, 0.0);
  const SampleBatch image = pushforward(emb, sample(model, cfg.mc_samples, kCharfunStream));
  for (int k = 0; k < cfg.charfun_probes; ++k) {
    const Vector f = t_probe(rng, emb) * radius(rng);
    const auto closed_image = charfun_closed(model, emb, f);
    const auto closed_direct = charfun_closed(model, Vector(emb.matrix() * f));
    table.absolute(idx("closed rho_K^(f) = rho^(Kf)", k), std::abs(closed_image - closed_direct), 0.0, 0.0);
    if (model.kind == MeasureKind::gaussian) {
      table.relative(idx("gaussian rho_K^(f) = exp(-f^T K^+K f / 2)", k), gaussian_image_charfun(emb, f).real(),
                     closed_image.real(), 1e-12, 1.0);
    }
    const auto mc = empirical_charfun(image, f);
    table.absolute(idx("MC Re rho_K^(f)", k), mc.value.real(), closed_image.real(),
                   cfg.tol.mc_standard_errors * mc.se_real);
    table.absolute(idx("MC Im rho_K^(f)", k), mc.value.imag(), closed_image.imag(),
                   cfg.tol.mc_standard_errors * mc.se_imag);
  }
  if (model.kind == MeasureKind::gaussian) {
    const auto cov = empirical_covariance(image);
    for (int i = 0; i < cfg.dim; ++i) {
      for (int j = i; j < cfg.dim; ++j) {
        table.absolute("MC image covariance (" + std::to_string(i) + "," + std::to_string(j) + ") vs K^T K",
                       cov.value(i, j), emb.t_gram()(i, j), cfg.tol.mc_standard_errors * cov.standard_error(i, j));
      }
    }
  }
  return suite;
}

SuiteResult run_transport(const ExperimentConfig& cfg) {
  SuiteResult suite{"transport", {}, json::object()};
  Table table(suite);
  const FieldSpec field = cfg.field_spec();
  const Embedding emb = cfg.embedding();
  const FieldSpec conjugated = conjugated_field(field, emb);
  auto rng = Xoshiro256::substream(cfg.seed, kTransportProbeStream);
  const int n_max = std::min(8, cfg.cutoff);

  const BigK kk(emb, cfg.cutoff);
  table.residual("K*K = Id in the T metric (max relative |S_n^T S_n - G_n|)", kk.unitarity_residual(),
                 cfg.tol.unitarity);
  std::vector<double> level_conditions;
  for (int n = 0; n <= cfg.cutoff; ++n) {
    Eigen::JacobiSVD<Matrix> svd(kk.standard(n));
    const auto& s = svd.singularValues();
    level_conditions.push_back(s[0] / s[s.size() - 1]);
  }
  suite.details["k_condition_number"] = emb.condition_number();
  suite.details["tensor_power_condition_numbers"] = level_conditions;

  for (int k = 0; k < cfg.probes; ++k) {
    const Vector f = t_probe(rng, emb);
    const Vector kf = emb.matrix() * f;
    const AssembledOperator entrywise = assemble_operator(conjugated, f, cfg.cutoff);
    const AssembledOperator global = conjugated_operator(field, emb, f, cfg.cutoff);
    table.residual(idx("max |K^-1 J(Kf) K - J_K(f) entry formulas|", k),
                   (entrywise.matrix() - global.matrix()).cwiseAbs().maxCoeff(), cfg.tol.conjugation);
    Vector vk = FockVector::vacuum(cfg.dim, cfg.cutoff).flat();
    Vector vh = vk;
    for (int n = 1; n <= n_max; ++n) {
      vk = entrywise.matrix() * vk;
      vh = assemble_operator(field, kf, cfg.cutoff).matrix() * vh;
      table.relative(idx("<J_K(f)^" + std::to_string(n) + " Omega,Omega> = <J(Kf)^" + std::to_string(n) + " Omega,Omega>", k),
                     vk[0], vh[0], cfg.tol.transport, std::max(1.0, std::abs(vh[0])));
    }
  }

  // K⁺ restricted to ran(K) is K⁻¹ in the T-metric representation: ω = G_T g for ξ = Kg.
  for (int k = 0; k < cfg.probes; ++k) {
    const Vector g = normal_vector(rng, cfg.dim);
    const Vector omega = k_plus(emb, emb.matrix() * g);
    const Vector expected = emb.t_gram() * g;
    table.relative(idx("K^+ K g = G_T g", k), (omega - expected).cwiseAbs().maxCoeff(), 0.0, 1e-12,
                   std::max(1.0, expected.cwiseAbs().maxCoeff()));
  }
  Eigen::FullPivLU<Matrix> lu(emb.matrix().transpose());
  table.absolute("numerical rank of K^+", lu.rank(), cfg.dim, 0.0);

  // U is an isometry L²(ρ_K) -> L²(ρ)
  const int degree = std::min(4, cfg.cutoff / 2);
  try {
    const MonomialGram gram_h = monomial_gram(field, degree, 2 * degree);
    const MonomialGram gram_t = monomial_gram(field, emb, degree, 2 * degree);
    for (int k = 0; k < cfg.probes; ++k) {
      const Vector coeffs = normal_vector(rng, static_cast<int>(fock_dimension(cfg.dim, degree)));
      const DualPolynomial q = DualPolynomial::from_flat(cfg.dim, degree, coeffs, Side::T);
      const Vector pulled = pullback_u(emb, q).flat(degree);
      const double lhs = pulled.dot(gram_h.gram * pulled);
      const double rhs = coeffs.dot(gram_t.gram * coeffs);
      table.relative(idx("||Uq||^2 in L2(rho) = ||q||^2 in L2(rho_K)", k), lhs, rhs, cfg.tol.transport,
                     std::max(1.0, std::abs(rhs)));
    }
  } catch (const std::exception& e) {
    table.failure("U isometry", e.what());
  }
  return suite;
}

void chaos_side(Table& table, const std::string& label, const ChaosBasis& basis,
                const std::vector<DualPolynomial>& images, const std::vector<int>& image_levels,
                const ExperimentConfig& cfg) {
  for (int m = 0; m < basis.level_count(); ++m) {
    table.absolute(label + " dim level " + std::to_string(m), static_cast<double>(basis.level(m).vectors.cols()),
                   static_cast<double>(level_dimension(cfg.dim, m)), 0.0);
  }
  table.residual(label + " max cross-level inner product", basis.max_cross_level(), cfg.tol.chaos);
  Matrix coeffs(basis.gram().gram.rows(), static_cast<Eigen::Index>(images.size()));
  for (std::size_t k = 0; k < images.size(); ++k) {
    coeffs.col(static_cast<Eigen::Index>(k)) = images[k].flat(basis.max_degree());
  }
  const Matrix gram = coeffs.transpose() * basis.gram().gram * coeffs;
  table.residual(label + " Parseval: max |Gram of transformed Fock basis - Id|",
                 (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), cfg.tol.parseval);
  double leakage = 0.0;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const auto proj = project(basis, images[k]);
    for (int m = 0; m < basis.level_count(); ++m) {
      if (m != image_levels[k]) {
        leakage = std::max(leakage, proj.level_norms[static_cast<std::size_t>(m)]);
      }
    }
    leakage = std::max(leakage, proj.residual);
  }
  table.residual(label + " max leakage of level-n Fock basis images outside level n", leakage, cfg.tol.chaos);
}

double monomial_at(const MultiIndex& alpha, const Eigen::Ref<const Vector>& xi) {
  double v = std::sqrt(factorial(alpha.degree()) / multi_factorial(alpha));
  for (int i = 0; i < alpha.dim(); ++i) {
    v *= std::pow(xi[i], alpha[i]);
  }
  return v;
}

SuiteResult run_chaos(const ExperimentConfig& cfg) {
  SuiteResult suite{"chaos", {}, json::object()};
  Table table(suite);
  const FieldSpec field = cfg.field_spec();
  const Embedding emb = cfg.embedding();
  const int degree = std::min(cfg.chaos_degree, cfg.cutoff / 2);
  suite.details["degree"] = degree;

  std::vector<FockVector> fock_basis;
  std::vector<int> levels;
  for (int n = 0; n <= degree; ++n) {
    for (const auto& alpha : level_basis(cfg.dim, n).indices()) {
      fock_basis.push_back(FockVector::basis(alpha, degree));
      levels.push_back(n);
    }
  }

  MonomialGram gram_h;
  try {
    gram_h = monomial_gram(field, degree, 2 * degree);
    const ChaosBasis basis = chaotic_subspaces(gram_h);
    const FourierTransform transform(field, degree);
    std::vector<DualPolynomial> images;
    for (const auto& e : fock_basis) {
      images.push_back(transform.forward(e));
    }
    chaos_side(table, "H-side", basis, images, levels, cfg);
    std::vector<double> v_norms;
    for (int m = 0; m <= degree; ++m) {
      v_norms.push_back(Eigen::JacobiSVD<Matrix>(transform.regularity(m).columns).singularValues()(0));
    }
    suite.details["v_operator_norms"] = v_norms;
  } catch (const std::exception& e) {
    table.failure("H-side chaos", e.what());
  }

  try {
    const ChaosBasis basis = chaotic_subspaces(monomial_gram(field, emb, degree, 2 * degree));
    const ImageFourierTransform transform(field, emb, degree);
    std::vector<DualPolynomial> images;
    for (const auto& e : fock_basis) {
      images.push_back(transform(e));
    }
    chaos_side(table, "T-side", basis, images, levels, cfg);
  } catch (const std::exception& e) {
    table.failure("T-side chaos", e.what());
  }

  if (gram_h.labels.size() > 0) {
    const SampleBatch batch = sample(cfg.measure(), cfg.mc_samples, kChaosStream);
    auto rng = Xoshiro256::substream(cfg.seed, kChaosProbeStream);
    const auto size = gram_h.labels.size();
    std::uniform_int_distribution<std::size_t> pick(0, size - 1);
    for (int k = 0; k < 10; ++k) {
      const std::size_t r = pick(rng);
      const std::size_t c = pick(rng);
      Vector values(batch.count());
      for (Eigen::Index s = 0; s < batch.count(); ++s) {
        const Vector xi = batch.samples.row(s).transpose();
        values[s] = monomial_at(gram_h.labels[r].alpha, xi) * monomial_at(gram_h.labels[c].alpha, xi);
      }
      const double mean = values.mean();
      const double se = std::sqrt((values.array() - mean).square().sum() / (values.size() - 1.0) / values.size());
      table.absolute(idx("MC Gram entry vs exact moment", k), mean,
                     gram_h.gram(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)),
                     cfg.tol.mc_standard_errors * se);
    }
  }
  return suite;
}

SuiteResult run_eigencheck(const ExperimentConfig& cfg) {
  SuiteResult suite{"eigencheck", {}, json::object()};
  Table table(suite);
  const FieldSpec field = cfg.field_spec();
  const Embedding emb = cfg.embedding();
  const FieldSpec conjugated = conjugated_field(field, emb);
  auto rng = Xoshiro256::substream(cfg.seed, kEigenProbeStream);
  for (int k = 0; k < cfg.eigen_points; ++k) {
    const Vector xi = normal_vector(rng, cfg.dim);
    table.residual(idx("<P(xi), J(phi)Phi> = <xi,phi><P(xi),Phi> relative residual", k),
                   eigenvector_residual(field, xi, cfg.cutoff), cfg.tol.eigen);
    table.residual(idx("<Q(omega), J_K(f)F> = <omega,f><Q(omega),F> relative residual", k),
                   q_eigenvector_residual(field, emb, conjugated, xi, cfg.cutoff), cfg.tol.eigen);
  }
  // I J(φ) I⁻¹ is multiplication by ⟨ξ, φ⟩
  const FourierTransform transform(field, cfg.cutoff);
  for (int k = 0; k < cfg.eigen_points; ++k) {
    const Vector phi = normal_vector(rng, cfg.dim);
    Vector flat = Vector::Zero(static_cast<Eigen::Index>(fock_dimension(cfg.dim, cfg.cutoff)));
    flat.head(static_cast<Eigen::Index>(fock_dimension(cfg.dim, cfg.cutoff - 1))) =
        normal_vector(rng, static_cast<int>(fock_dimension(cfg.dim, cfg.cutoff - 1)));
    const FockVector state = FockVector::from_flat(cfg.dim, cfg.cutoff, flat);
    const FockVector moved = assemble_operator(field, phi, cfg.cutoff).apply(state);
    const Vector lhs = transform.forward(moved).flat(cfg.cutoff);
    const Vector rhs = transform.forward(state).times_linear(phi).flat(cfg.cutoff + 1).head(lhs.size());
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    table.relative(idx("I J(phi) Phi = <xi,phi> I Phi (coefficients)", k), (lhs - rhs).cwiseAbs().maxCoeff(), 0.0,
                   cfg.tol.parseval, scale);
  }
  return suite;
}

json row_json(const CheckRow& row) {
  return {{"identity", row.identity}, {"lhs", row.lhs}, {"rhs", row.rhs},
          {"abs_err", row.abs_err},   {"tol", row.tol}, {"pass", row.pass}};
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::vector<double> cumulant_moment_oracle(MeasureKind kind, const std::vector<double>& weights,
                                           const Vector& phi, int max_order) {
  std::vector<double> cumulants(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (kind == MeasureKind::gaussian) {
    if (max_order >= 2) {
      cumulants[2] = phi.squaredNorm();
    }
  } else {
    for (int k = 2; k <= max_order; ++k) {
      double c = 0.0;
      for (int i = 0; i < phi.size(); ++i) {
        const double w = weights[static_cast<std::size_t>(i)];
        c += w * std::pow(phi[i] / std::sqrt(w), k);
      }
      cumulants[static_cast<std::size_t>(k)] = c;
    }
  }
  // m_n = Σ_{k=1}^{n} C(n-1, k-1) κ_k m_{n-k}
  std::vector<double> moments(static_cast<std::size_t>(max_order) + 1, 0.0);
  moments[0] = 1.0;
  for (int n = 1; n <= max_order; ++n) {
    double m = 0.0;
    for (int k = 1; k <= n; ++k) {
      m += static_cast<double>(binomial(n - 1, k - 1)) * cumulants[static_cast<std::size_t>(k)] *
           moments[static_cast<std::size_t>(n - k)];
    }
    moments[static_cast<std::size_t>(n)] = m;
  }
  return {moments.begin() + 1, moments.end()};
}

RunResult run(const ExperimentConfig& cfg) {
  RunResult result;
  std::vector<std::string> names;
  for (const auto& s : cfg.suites) {
    if (s == "all") {
      names = kSuiteNames;
      break;
    }
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      names.push_back(s);
    }
  }

  for (const auto& name : names) {
    SuiteResult suite;
    try {
      if (name == "validate") suite = run_validate(cfg);
      else if (name == "moments") suite = run_moments(cfg);
      else if (name == "charfun") suite = run_charfun(cfg);
      else if (name == "transport") suite = run_transport(cfg);
      else if (name == "chaos") suite = run_chaos(cfg);
      else if (name == "eigencheck") suite = run_eigencheck(cfg);
    } catch (const std::exception& e) {
      suite.name = name;
      suite.rows.push_back({std::string("suite aborted: ") + e.what(), NAN, NAN, NAN, 0.0, false});
    }
    result.suites.push_back(std::move(suite));
  }

  const Embedding emb = cfg.embedding();
  json report;
  report["tool"] = "fockbench";
  report["generated_at"] = timestamp();
  report["config"] = cfg.source;
  report["resolved"] = {{"preset", to_string(cfg.preset)},
                        {"field", cfg.field == MeasureKind::gaussian ? "gaussian" : "poisson"},
                        {"d", cfg.dim},
                        {"cutoff", cfg.cutoff},
                        {"weights", cfg.weights},
                        {"K", json::accept(cfg.k_description) ? json::parse(cfg.k_description) : json(cfg.k_description)},
                        {"mc_samples", cfg.mc_samples},
                        {"seed", cfg.seed}};
  if (cfg.grid) {
    report["resolved"]["grid"] = cfg.grid->x;
  }
  std::vector<double> sv(emb.singular_values().data(), emb.singular_values().data() + emb.singular_values().size());
  report["embedding"] = {{"singular_values", sv}, {"condition_number", emb.condition_number()}};
  bool all_pass = true;
  report["suites"] = json::object();
  for (const auto& suite : result.suites) {
    json rows = json::array();
    for (const auto& row : suite.rows) {
      rows.push_back(row_json(row));
    }
    report["suites"][suite.name] = {{"pass", suite.passed()}, {"rows", rows}, {"details", suite.details}};
    all_pass = all_pass && suite.passed();
  }
  report["pass"] = all_pass;
  result.report = std::move(report);
  result.exit_code = all_pass ? 0 : 1;
  return result;
}

std::string to_csv(const SuiteResult& suite) {
  std::ostringstream out;
  out << "identity,lhs,rhs,abs_err,tol,pass\n";
  out << std::setprecision(17);
  for (const auto& row : suite.rows) {
    std::string id = row.identity;
    std::string quoted = "\"";
    for (char c : id) {
      quoted += c;
      if (c == '"') {
        quoted += '"';
      }
    }
    quoted += '"';
    out << quoted << ',' << row.lhs << ',' << row.rhs << ',' << row.abs_err << ',' << row.tol << ','
        << (row.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

void write_outputs(const RunResult& result, const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "report.json") << result.report.dump(2) << '\n';
  if (cfg.format == OutputFormat::csv) {
    for (const auto& suite : result.suites) {
      std::ofstream(dir / (suite.name + ".csv")) << to_csv(suite);
    }
  }
}

int run_command(const std::filesystem::path& config_path, const std::optional<std::string>& suite,
                const std::optional<std::uint64_t>& seed, const std::optional<std::filesystem::path>& out_dir,
                std::ostream& log) {
  ExperimentConfig cfg;
  try {
    nlohmann::json doc;
    {
      std::ifstream in(config_path);
      if (!in) {
        throw ConfigError("cannot open config file " + config_path.string());
      }
      try {
        in >> doc;
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    if (suite) {
      doc["suites"] = *suite;
    }
    if (seed) {
      doc["mc"]["seed"] = *seed;
    }
    cfg = parse_config(doc);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  }
  const RunResult result = run(cfg);
  const auto dir = out_dir ? *out_dir : cfg.output_path;
  write_outputs(result, cfg, dir);
  for (const auto& s : result.suites) {
    std::size_t failed = 0;
    for (const auto& row : s.rows) {
      failed += row.pass ? 0 : 1;
    }
    log << (s.passed() ? "PASS " : "FAIL ") << s.name << " (" << s.rows.size() - failed << "/" << s.rows.size()
        << " identities)\n";
    for (const auto& row : s.rows) {
      if (!row.pass) {
        log << "  failed: " << row.identity << "  abs_err=" << row.abs_err << " tol=" << row.tol << '\n';
      }
    }
  }
  log << "report: " << (dir / "report.json").string() << '\n';
  return result.exit_code;
}

}  // namespace fockbench::cli
