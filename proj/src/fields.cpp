#include "fockbench/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "fockbench/errors.hpp"
#include "fockbench/random.hpp"

namespace fockbench {

namespace {

Eigen::Index as_index(std::size_t k) { return static_cast<Eigen::Index>(k); }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  if (std::min(m.rows(), m.cols()) <= 200) {
    const Matrix gram = m.cols() <= m.rows() ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }
  // power iteration on MᵀM for large blocks
  Vector v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = 1.5 + std::sin(static_cast<double>(i + 1));
  }
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vector w = m.transpose() * (m * v);
    const double next = w.norm();
    if (next == 0.0) {
      return 0.0;
    }
    v = w / next;
    if (std::abs(next - estimate) <= 1e-12 * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return std::sqrt(estimate);
}

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) {
    return 1.0;
  }
  const double smallest = s[s.size() - 1];
  return smallest > 0.0 ? s[0] / smallest : std::numeric_limits<double>::infinity();
}

Vector unit_normal(Xoshiro256& rng, int d) {
  std::normal_distribution<double> normal;
  Vector v(d);
  for (int i = 0; i < d; ++i) {
    v[i] = normal(rng);
  }
  const double n = v.norm();
  return n > 0.0 ? Vector(v / n) : Vector(Vector::Unit(d, 0));
}

void require_dim(const FieldSpec& spec, const Vector& phi, const char* what) {
  if (phi.size() != spec.dim) {
    std::ostringstream msg;
    msg << what << ": vector of length " << phi.size() << " for a field of dimension "
        << spec.dim;
    throw DimensionError(msg.str());
  }
}

}  // namespace

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::gaussian:
      return "gaussian";
    case FieldKind::poisson:
      return "poisson";
    case FieldKind::conjugated:
      return "conjugated";
    case FieldKind::custom:
      return "custom";
  }
  return "custom";
}

Matrix FieldSpec::a(const Vector& phi, int n) const { return a_block(phi, n); }

Matrix FieldSpec::a_adjoint(const Vector& phi, int n) const {
  if (a_adjoint_block) {
    return a_adjoint_block(phi, n);
  }
  return a_block(phi, n).transpose();
}

Matrix FieldSpec::b(const Vector& phi, int n) const { return b_block(phi, n); }

FieldSpec gaussian_field(int d) {
  if (d < 1) {
    throw DimensionError("gaussian_field: d must be >= 1");
  }
  FieldSpec spec;
  spec.dim = d;
  spec.kind = FieldKind::gaussian;
  spec.a_block = [](const Vector& phi, int n) { return create_matrix(phi, n); };
  spec.b_block = [d](const Vector&, int n) {
    const auto len = as_index(level_dimension(d, n));
    return Matrix::Zero(len, len).eval();
  };
  return spec;
}

FieldSpec poisson_field(std::vector<double> weights) {
  if (weights.empty()) {
    throw DimensionError("poisson_field: at least one grid node required");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("poisson_field: weights must be positive and finite");
    }
  }
  FieldSpec spec;
  spec.dim = static_cast<int>(weights.size());
  spec.kind = FieldKind::poisson;
  Vector inv_sqrt(spec.dim);
  for (int i = 0; i < spec.dim; ++i) {
    inv_sqrt[i] = 1.0 / std::sqrt(weights[static_cast<std::size_t>(i)]);
  }
  spec.weights = std::move(weights);
  spec.a_block = [](const Vector& phi, int n) { return create_matrix(phi, n); };
  spec.b_block = [inv_sqrt](const Vector& phi, int n) {
    const Matrix multiplier = phi.cwiseProduct(inv_sqrt).asDiagonal();
    return second_quantization(multiplier, n);
  };
  return spec;
}

AssembledOperator::AssembledOperator(int dim, int cutoff, Matrix matrix)
    : dim_(dim), cutoff_(cutoff), matrix_(std::move(matrix)) {
  const auto expected = as_index(fock_dimension(dim, cutoff));
  if (matrix_.rows() != expected || matrix_.cols() != expected) {
    throw DimensionError("AssembledOperator: matrix size does not match the Fock dimension");
  }
}

Matrix AssembledOperator::block(int row_level, int col_level) const {
  return matrix_.block(as_index(level_offset(dim_, row_level)),
                       as_index(level_offset(dim_, col_level)),
                       as_index(level_dimension(dim_, row_level)),
                       as_index(level_dimension(dim_, col_level)));
}

FockVector AssembledOperator::apply(const FockVector& x) const {
  if (x.dim() != dim_ || x.cutoff() != cutoff_) {
    throw DimensionError("AssembledOperator::apply: vector does not live on this Fock space");
  }
  return FockVector::from_flat(dim_, cutoff_, matrix_ * x.flat());
}

AssembledOperator assemble_operator(const FieldSpec& spec, const Vector& phi, int cutoff) {
  require_dim(spec, phi, "assemble_operator");
  if (cutoff < 0) {
    throw DimensionError("assemble_operator: negative cutoff");
  }
  const int d = spec.dim;
  Matrix m = Matrix::Zero(as_index(fock_dimension(d, cutoff)), as_index(fock_dimension(d, cutoff)));
  for (int n = 0; n <= cutoff; ++n) {
    const auto off = as_index(level_offset(d, n));
    const auto len = as_index(level_dimension(d, n));
    const Matrix b = spec.b(phi, n);
    if (b.rows() != len || b.cols() != len) {
      throw DimensionError("assemble_operator: b block has the wrong shape");
    }
    m.block(off, off, len, len) = b;
    if (n < cutoff) {
      const auto up_off = as_index(level_offset(d, n + 1));
      const auto up_len = as_index(level_dimension(d, n + 1));
      const Matrix a = spec.a(phi, n);
      const Matrix a_star = spec.a_adjoint(phi, n);
      if (a.rows() != up_len || a.cols() != len || a_star.rows() != len ||
          a_star.cols() != up_len) {
        throw DimensionError("assemble_operator: a block has the wrong shape");
      }
      m.block(up_off, off, up_len, len) = a;
      m.block(off, up_off, len, up_len) = a_star;
    }
  }
  return {d, cutoff, std::move(m)};
}

double vacuum_moment(const FieldSpec& spec, std::span<const Vector> phis, int cutoff) {
  const int n = static_cast<int>(phis.size());
  if (cutoff < n) {
    throw TruncationError("vacuum_moment: cutoff " + std::to_string(cutoff) +
                          " is below the number of factors " + std::to_string(n));
  }
  Vector v = FockVector::vacuum(spec.dim, cutoff).flat();
  for (auto it = phis.rbegin(); it != phis.rend(); ++it) {
    v = assemble_operator(spec, *it, cutoff).matrix() * v;
  }
  return v[0];
}

double power_moment(const FieldSpec& spec, const Vector& phi, int n, int cutoff) {
  if (cutoff < n) {
    throw TruncationError("power_moment: cutoff below the moment order");
  }
  const AssembledOperator op = assemble_operator(spec, phi, cutoff);
  Vector v = FockVector::vacuum(spec.dim, cutoff).flat();
  for (int k = 0; k < n; ++k) {
    v = op.matrix() * v;
  }
  return v[0];
}

MixedProducts::MixedProducts(const FieldSpec& spec, int cutoff) : dim_(spec.dim), cutoff_(cutoff) {
  coordinate_ops_.reserve(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    coordinate_ops_.push_back(assemble_operator(spec, Vector::Unit(dim_, i), cutoff).matrix().sparseView());
  }
}

const Vector& MixedProducts::vector(const MultiIndex& gamma) {
  if (gamma.dim() != dim_) {
    throw DimensionError("MixedProducts: multi-index dimension mismatch");
  }
  if (gamma.degree() > cutoff_) {
    throw TruncationError("MixedProducts: product order exceeds the cutoff");
  }
  if (auto it = cache_.find(gamma); it != cache_.end()) {
    return it->second;
  }
  Vector v;
  if (gamma.degree() == 0) {
    v = FockVector::vacuum(dim_, cutoff_).flat();
  } else {
    // Strip the last nonzero slot so that e_1 factors are applied last, i.e.
    // Π = J(e_1)^{γ_1} ... J(e_d)^{γ_d} Ω.
    int i = 0;
    while (gamma[i] == 0) {
      ++i;
    }
    v = coordinate_ops_[static_cast<std::size_t>(i)] * vector(gamma.minus(i));
  }
  return cache_.emplace(gamma, std::move(v)).first->second;
}

Matrix regularity_top_block(MixedProducts& products, int n) {
  const int d = products.dim();
  const auto& basis = level_basis(d, n);
  const auto off = as_index(level_offset(d, n));
  Matrix top(as_index(basis.size()), as_index(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double scale = std::sqrt(factorial(n) / multi_factorial(basis[k]));
    top.col(as_index(k)) = scale * products.vector(basis[k]).segment(off, top.rows());
  }
  return top;
}

FieldReport validate_field(const FieldSpec& spec, int cutoff, double tolerance, std::uint64_t seed,
                           int pairs) {
  FieldReport report;
  report.cutoff = cutoff;
  report.tolerance = tolerance;
  const int d = spec.dim;
  auto rng = Xoshiro256::substream(seed, 0);

  std::vector<Vector> probes;
  for (int i = 0; i < d; ++i) {
    probes.push_back(Vector::Unit(d, i));
  }
  for (int k = 0; k < pairs; ++k) {
    probes.push_back(unit_normal(rng, d));
  }

  // (a) symmetry of every assembled operator.
  for (const auto& phi : probes) {
    const Matrix m = assemble_operator(spec, phi, cutoff).matrix();
    report.max_asymmetry = std::max(report.max_asymmetry, (m - m.transpose()).cwiseAbs().maxCoeff());
  }
  if (!(report.max_asymmetry <= tolerance)) {
    report.failures.push_back("(a) J(phi) is not symmetric: max |J - J^T| = " +
                              std::to_string(report.max_asymmetry));
  }

  // (b) block norms on the coordinate directions.
  for (int n = 0; n <= cutoff; ++n) {
    double a_norm = 0.0;
    double b_norm = 0.0;
    for (int i = 0; i < d; ++i) {
      const Vector e = Vector::Unit(d, i);
      a_norm = std::max(a_norm, spectral_norm(spec.a(e, n)));
      b_norm = std::max(b_norm, spectral_norm(spec.b(e, n)));
    }
    report.a_norms.push_back(a_norm);
    report.b_norms.push_back(b_norm);
    if (!std::isfinite(a_norm) || !std::isfinite(b_norm)) {
      report.failures.push_back("(b) non-finite block norm at level " + std::to_string(n));
    }
  }

  // (c) commutators on the truncation-safe subspace, degrees ≤ N-2.
  if (cutoff >= 2) {
    const auto safe_cols = as_index(fock_dimension(d, cutoff - 2));
    for (int k = 0; k < pairs; ++k) {
      const Vector phi = unit_normal(rng, d);
      const Vector psi = unit_normal(rng, d);
      const Matrix jp = assemble_operator(spec, phi, cutoff).matrix();
      const Matrix jq = assemble_operator(spec, psi, cutoff).matrix();
      const Eigen::SparseMatrix<double> sp = jp.sparseView();
      const Eigen::SparseMatrix<double> sq = jq.sparseView();
      const Matrix commutator = sp * Matrix(jq.leftCols(safe_cols)) - sq * Matrix(jp.leftCols(safe_cols));
      const double norm = spectral_norm(commutator);
      report.commutator_norms.push_back(norm);
      if (!(norm <= tolerance)) {
        report.failures.push_back("(c) commutator norm " + std::to_string(norm) +
                                  " exceeds tolerance");
      }
    }
  }

  // (d) linearity of the assembled operator in φ.
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int k = 0; k < pairs; ++k) {
    const Vector phi = unit_normal(rng, d);
    const Vector psi = unit_normal(rng, d);
    const double s = coef(rng);
    const double t = coef(rng);
    const Matrix lhs = assemble_operator(spec, s * phi + t * psi, cutoff).matrix();
    const Matrix rhs = s * assemble_operator(spec, phi, cutoff).matrix() +
                       t * assemble_operator(spec, psi, cutoff).matrix();
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    report.max_linearity_residual =
        std::max(report.max_linearity_residual, (lhs - rhs).cwiseAbs().maxCoeff() / scale);
  }
  if (!(report.max_linearity_residual <= std::max(tolerance, 1e-12))) {
    report.failures.push_back("(d) blocks are not linear in phi: residual " +
                              std::to_string(report.max_linearity_residual));
  }

  // (e) invertibility of V_{n,n}.
  MixedProducts products(spec, cutoff);
  for (int n = 1; n <= cutoff; ++n) {
    const double cond = condition_number(regularity_top_block(products, n));
    report.v_condition_numbers.push_back(cond);
    if (!std::isfinite(cond) || cond > 1e14) {
      report.failures.push_back("(e) V_{" + std::to_string(n) + "," + std::to_string(n) +
                                "} is numerically singular");
    }
  }
  return report;
}

}  // namespace fockbench
