#include "fockbench/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <utility>

#include "fockbench/errors.hpp"

namespace fockbench {

namespace {

Eigen::Index as_index(std::size_t k) { return static_cast<Eigen::Index>(k); }

MonomialGram gram_from_field(const FieldSpec& spec, int n, int cutoff, Side side) {
  if (n < 0) {
    throw DimensionError("monomial_gram: negative degree");
  }
  if (cutoff < 2 * n) {
    throw TruncationError("monomial_gram: cutoff " + std::to_string(cutoff) +
                          " is below twice the degree " + std::to_string(n));
  }
  MonomialGram out;
  out.dim = spec.dim;
  out.degree = n;
  out.side = side;
  std::vector<double> scale;
  for (int j = 0; j <= n; ++j) {
    for (const auto& alpha : level_basis(spec.dim, j).indices()) {
      out.labels.push_back({alpha});
      scale.push_back(std::sqrt(factorial(j) / multi_factorial(alpha)));
    }
  }
  // ⟨ξ^{⊗j}, E_α⟩⟨ξ^{⊗k}, E_β⟩ = c_α c_β Π ξ_i^{(α+β)_i}, whose integral is the
  // mixed vacuum moment of the coordinate operators.
  MixedProducts products(spec, 2 * n);
  const auto size = as_index(out.labels.size());
  out.gram.resize(size, size);
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = r; c < size; ++c) {
      const MultiIndex gamma = out.labels[static_cast<std::size_t>(r)].alpha +
                               out.labels[static_cast<std::size_t>(c)].alpha;
      const double value = scale[static_cast<std::size_t>(r)] * scale[static_cast<std::size_t>(c)] *
                           products.moment(gamma);
      out.gram(r, c) = out.gram(c, r) = value;
    }
  }
  return out;
}

}  // namespace

MonomialGram monomial_gram(const FieldSpec& spec, int n, int cutoff, Side side) {
  return gram_from_field(spec, n, cutoff, side);
}

MonomialGram monomial_gram(const FieldSpec& spec, const Embedding& emb, int n, int cutoff) {
  return gram_from_field(conjugated_field(spec, emb), n, cutoff, Side::T);
}

ChaosBasis::ChaosBasis(MonomialGram gram, std::vector<ChaosLevel> levels)
    : gram_(std::move(gram)), levels_(std::move(levels)) {}

DualPolynomial ChaosBasis::polynomial(int m, int k) const {
  return DualPolynomial::from_flat(dim(), max_degree(), level(m).vectors.col(k), side());
}

double ChaosBasis::inner(const DualPolynomial& p, const DualPolynomial& q) const {
  return inner(p.flat(max_degree()), q.flat(max_degree()));
}

double ChaosBasis::max_cross_level() const {
  double worst = 0.0;
  for (int a = 0; a < level_count(); ++a) {
    for (int b = a + 1; b < level_count(); ++b) {
      const Matrix cross = level(a).vectors.transpose() * gram_.gram * level(b).vectors;
      worst = std::max(worst, cross.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double ChaosBasis::orthonormality_defect() const {
  Matrix all(gram_.gram.rows(), 0);
  for (const auto& lv : levels_) {
    Matrix grown(all.rows(), all.cols() + lv.vectors.cols());
    grown << all, lv.vectors;
    all = std::move(grown);
  }
  const Matrix g = all.transpose() * gram_.gram * all;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

ChaosBasis chaotic_subspaces(const MonomialGram& gram) {
  const Matrix& g = gram.gram;
  // rank check on every leading block of degree ≤ m
  for (int m = 0; m <= gram.degree; ++m) {
    const auto size = as_index(fock_dimension(gram.dim, m));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(g.topLeftCorner(size, size), Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    const double largest = eig.eigenvalues().maxCoeff();
    if (!(smallest >= kGramRankTolerance * largest)) {
      std::ostringstream msg;
      msg << "chaotic_subspaces: Gram matrix is numerically singular at level " << m
          << " (eigenvalue ratio " << std::scientific << std::setprecision(3) << smallest / largest << ")";
      throw SingularError(msg.str());
    }
  }

  std::vector<ChaosLevel> levels;
  std::vector<Vector> accepted;
  auto g_inner = [&g](const Vector& a, const Vector& b) { return a.dot(g * b); };
  for (int m = 0; m <= gram.degree; ++m) {
    ChaosLevel level{m, Matrix(g.rows(), as_index(level_dimension(gram.dim, m)))};
    const auto off = as_index(level_offset(gram.dim, m));
    for (Eigen::Index k = 0; k < level.vectors.cols(); ++k) {
      Vector v = Vector::Unit(g.rows(), off + k);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : accepted) {
          v -= g_inner(u, v) * u;
        }
      }
      const double norm_sq = g_inner(v, v);
      if (!(norm_sq > 0.0)) {
        throw SingularError("chaotic_subspaces: monomial " + std::to_string(k) + " of level " +
                            std::to_string(m) + " is dependent on lower monomials");
      }
      v /= std::sqrt(norm_sq);
      level.vectors.col(k) = v;
      accepted.push_back(std::move(v));
    }
    levels.push_back(std::move(level));
  }
  return {gram, std::move(levels)};
}

ChaosProjection project(const ChaosBasis& basis, const DualPolynomial& p) {
  if (p.degree() > basis.max_degree()) {
    throw DimensionError("project: polynomial degree " + std::to_string(p.degree()) +
                         " exceeds the basis degree " + std::to_string(basis.max_degree()));
  }
  if (p.dim() != basis.dim()) {
    throw DimensionError("project: dimension mismatch");
  }
  const Vector coeffs = p.flat(basis.max_degree());
  const Matrix& g = basis.gram().gram;
  ChaosProjection out;
  Vector reconstruction = Vector::Zero(coeffs.size());
  for (int m = 0; m < basis.level_count(); ++m) {
    const Matrix& vectors = basis.level(m).vectors;
    Vector component = vectors.transpose() * (g * coeffs);
    reconstruction += vectors * component;
    out.level_norms.push_back(component.norm());
    out.components.push_back(std::move(component));
  }
  const Vector diff = coeffs - reconstruction;
  out.residual = std::sqrt(std::max(0.0, diff.dot(g * diff)));
  return out;
}

}  // namespace fockbench
