#include "fockbench/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>

#include "fockbench/errors.hpp"

namespace fockbench {

namespace {

Eigen::Index as_index(std::size_t k) { return static_cast<Eigen::Index>(k); }

/// Per-level entry blocks of a conjugated field on the coordinate directions
/// of T₊, shared by the block closures. The blocks are linear in f, so
/// α_n(f) = Σ_j f_j α_n(e_j).
///
/// The entry formulas are evaluated in the T-orthonormal frame s_i = VΣ⁻¹e_i
/// (K = UΣVᵀ), where the unitary K̄ : T → H has the orthogonal matrix U; the
/// frame change from s to the stored t-basis is Uᵀ. Going through standard
/// coordinates instead loses about cond(K)^{2n} in accuracy.
class EntryCache {
 public:
  EntryCache(FieldSpec spec, const Embedding& emb) : spec_(std::move(spec)), k_(emb.matrix()) {
    Eigen::JacobiSVD<Matrix> svd(k_, Eigen::ComputeFullU);
    u_ = svd.matrixU();
  }

  const std::vector<Matrix>& alpha(int n) { return blocks(n, alpha_, true); }
  const std::vector<Matrix>& beta(int n) { return blocks(n, beta_, false); }

 private:
  FieldSpec spec_;
  Matrix k_;
  Matrix u_;
  std::mutex mutex_;
  std::vector<Matrix> frames_;
  std::map<int, std::vector<Matrix>> alpha_;
  std::map<int, std::vector<Matrix>> beta_;

  const Matrix& frame(int n) {
    while (static_cast<int>(frames_.size()) <= n) {
      frames_.push_back(tensor_power_map(u_, static_cast<int>(frames_.size())));
    }
    return frames_[static_cast<std::size_t>(n)];
  }

  const std::vector<Matrix>& blocks(int n, std::map<int, std::vector<Matrix>>& store, bool raising) {
    std::lock_guard lock(mutex_);
    auto it = store.find(n);
    if (it != store.end()) {
      return it->second;
    }
    const Matrix lo = frame(n);
    const Matrix hi = raising ? frame(n + 1) : lo;
    std::vector<Matrix> out;
    for (int j = 0; j < k_.cols(); ++j) {
      const Vector phi = k_.col(j);
      const Eigen::SparseMatrix<double> raw = (raising ? spec_.a(phi, n) : spec_.b(phi, n)).sparseView();
      const Matrix in_frame = hi.transpose() * (raw * lo);
      out.push_back(hi * in_frame * lo.transpose());
    }
    return store.emplace(n, std::move(out)).first->second;
  }
};

Matrix combine(const std::vector<Matrix>& blocks, const Vector& f) {
  if (static_cast<std::size_t>(f.size()) != blocks.size()) {
    throw DimensionError("conjugated field: direction has the wrong dimension");
  }
  Matrix out = f[0] * blocks[0];
  for (std::size_t j = 1; j < blocks.size(); ++j) {
    out += f[static_cast<Eigen::Index>(j)] * blocks[j];
  }
  return out;
}

Vector concat_levels(const std::vector<Vector>& parts) {
  Eigen::Index total = 0;
  for (const auto& p : parts) {
    total += p.size();
  }
  Vector out(total);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    out.segment(off, p.size()) = p;
    off += p.size();
  }
  return out;
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) {
    total += b.rows();
  }
  Matrix out = Matrix::Zero(total, total);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

}  // namespace

Embedding::Embedding(Matrix k) : k_(std::move(k)) {
  if (k_.rows() != k_.cols() || k_.rows() < 1) {
    throw DimensionError("Embedding: K must be square (dim T = dim H) and nonempty");
  }
  if (!k_.allFinite()) {
    throw DimensionError("Embedding: K has non-finite entries");
  }
  Eigen::JacobiSVD<Matrix> svd(k_);
  singular_values_ = svd.singularValues();
  const double largest = singular_values_[0];
  const double smallest = singular_values_[singular_values_.size() - 1];
  const double threshold =
      static_cast<double>(k_.rows()) * std::numeric_limits<double>::epsilon() * largest;
  if (!(largest > 0.0) || smallest <= threshold) {
    std::ostringstream msg;
    msg << "Embedding: K is not injective; smallest singular value " << smallest
        << " (largest " << largest << ")";
    throw SingularError(msg.str());
  }
  k_inv_ = k_.inverse();
  gram_ = k_.transpose() * k_;
}

double Embedding::condition_number() const {
  return singular_values_[0] / singular_values_[singular_values_.size() - 1];
}

double Embedding::t_inner(const Vector& f, const Vector& g) const { return (k_ * f).dot(k_ * g); }

Vector Embedding::to_t_metric(const Vector& omega) const { return k_inv_ * (k_inv_.transpose() * omega); }

Vector k_plus(const Embedding& emb, const Vector& xi) {
  if (xi.size() != emb.dim()) {
    throw DimensionError("k_plus: dimension mismatch");
  }
  return emb.matrix().transpose() * xi;
}

BigK::BigK(const Embedding& emb, int cutoff) : dim_(emb.dim()), cutoff_(cutoff) {
  if (cutoff < 0) {
    throw DimensionError("BigK: negative cutoff");
  }
  for (int n = 0; n <= cutoff; ++n) {
    standard_.push_back(tensor_power_map(emb.matrix(), n));
    standard_inv_.push_back(tensor_power_map(emb.inverse(), n));
    gram_.push_back(tensor_power_map(emb.t_gram(), n));
  }
}

FockVector BigK::apply(const FockVector& t_side) const {
  if (t_side.dim() != dim_) {
    throw DimensionError("BigK::apply: dimension mismatch");
  }
  return t_side;
}

FockVector BigK::apply_inverse(const FockVector& h_side) const {
  if (h_side.dim() != dim_) {
    throw DimensionError("BigK::apply_inverse: dimension mismatch");
  }
  return h_side;
}

FockVector BigK::standard_to_t(const FockVector& standard) const {
  if (standard.cutoff() > cutoff_) {
    throw TruncationError("BigK::standard_to_t: vector exceeds the prepared cutoff");
  }
  FockVector out(dim_, standard.cutoff());
  for (int n = 0; n <= standard.cutoff(); ++n) {
    out.set_level(SymTensor(dim_, n, standard_[static_cast<std::size_t>(n)] * standard.level(n).coeffs()));
  }
  return out;
}

FockVector BigK::t_to_standard(const FockVector& t_side) const {
  if (t_side.cutoff() > cutoff_) {
    throw TruncationError("BigK::t_to_standard: vector exceeds the prepared cutoff");
  }
  FockVector out(dim_, t_side.cutoff());
  for (int n = 0; n <= t_side.cutoff(); ++n) {
    out.set_level(SymTensor(dim_, n, standard_inv_[static_cast<std::size_t>(n)] * t_side.level(n).coeffs()));
  }
  return out;
}

double BigK::unitarity_residual() const {
  double worst = 0.0;
  for (int n = 0; n <= cutoff_; ++n) {
    const auto& s = standard_[static_cast<std::size_t>(n)];
    const auto& g = gram_[static_cast<std::size_t>(n)];
    const Matrix pulled_back = s.transpose() * s;
    worst = std::max(worst, (pulled_back - g).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff());
  }
  return worst;
}

BigK big_k(const Embedding& emb, int cutoff) { return {emb, cutoff}; }

FieldSpec conjugated_field(const FieldSpec& spec, const Embedding& emb) {
  if (spec.dim != emb.dim()) {
    throw DimensionError("conjugated_field: field and embedding dimensions differ");
  }
  // Finite-dimensional invertible K maps Sym^n(ran K) = Sym^n(H) onto itself,
  // so the restriction assumption on a_n(Kf), b_n(Kf) holds automatically.
  FieldSpec out;
  out.dim = spec.dim;
  out.kind = FieldKind::conjugated;
  out.weights = spec.weights;
  if (emb.matrix() == Matrix::Identity(spec.dim, spec.dim)) {
    // U = Id and Kf = f: every entry formula reduces to the block itself,
    // evaluated directly so that no rounding separates J_K from J
    out.a_block = spec.a_block;
    out.a_adjoint_block = spec.a_adjoint_block;
    out.b_block = spec.b_block;
    return out;
  }
  auto cache = std::make_shared<EntryCache>(spec, emb);
  out.a_block = [cache](const Vector& f, int n) -> Matrix { return combine(cache->alpha(n), f); };
  out.a_adjoint_block = [cache](const Vector& f, int n) -> Matrix {
    return combine(cache->alpha(n), f).transpose();
  };
  out.b_block = [cache](const Vector& f, int n) -> Matrix { return combine(cache->beta(n), f); };
  return out;
}

AssembledOperator conjugated_operator(const FieldSpec& spec, const Embedding& emb, const Vector& f,
                                      int cutoff) {
  if (f.size() != emb.dim()) {
    throw DimensionError("conjugated_operator: dimension mismatch");
  }
  // 𝒦 is the coordinate identity between the t-basis and the e-basis.
  return assemble_operator(spec, emb.matrix() * f, cutoff);
}

ConjugationCheck compare_conjugations(const FieldSpec& spec, const Embedding& emb, const Vector& f,
                                      int cutoff, double tolerance) {
  ConjugationCheck check{conjugated_operator(spec, emb, f, cutoff),
                         assemble_operator(conjugated_field(spec, emb), f, cutoff), 0.0};
  check.max_abs_diff = (check.global.matrix() - check.entrywise.matrix()).cwiseAbs().maxCoeff();
  if (!(check.max_abs_diff <= tolerance)) {
    std::ostringstream msg;
    msg << "conjugated field: global conjugation and entry formulas differ by "
        << check.max_abs_diff << " (tolerance " << tolerance << ")";
    throw std::runtime_error(msg.str());
  }
  return check;
}

DualPolynomial pullback_u(const Embedding& emb, const DualPolynomial& q) {
  if (q.dim() != emb.dim()) {
    throw DimensionError("pullback_u: dimension mismatch");
  }
  std::vector<Vector> coeffs;
  for (int j = 0; j <= q.degree(); ++j) {
    coeffs.push_back(tensor_power_map(emb.matrix(), j) * q.coeff(j));
  }
  return {q.dim(), std::move(coeffs), Side::H};
}

DualPolynomial pullback_u_inverse(const Embedding& emb, const DualPolynomial& p) {
  if (p.dim() != emb.dim()) {
    throw DimensionError("pullback_u_inverse: dimension mismatch");
  }
  std::vector<Vector> coeffs;
  for (int j = 0; j <= p.degree(); ++j) {
    const Matrix s = tensor_power_map(emb.matrix(), j);
    Vector c = s.partialPivLu().solve(p.coeff(j));
    const double scale = std::max(1.0, p.coeff(j).cwiseAbs().maxCoeff());
    const double residual = (s * c - p.coeff(j)).cwiseAbs().maxCoeff() / scale;
    if (!std::isfinite(residual) || residual > 1e-8) {
      throw SingularError("pullback_u_inverse: degree-" + std::to_string(j) +
                          " coefficient is not in the range of K^{⊗j}");
    }
    coeffs.push_back(std::move(c));
  }
  return {p.dim(), std::move(coeffs), Side::T};
}

ImageFourierTransform::ImageFourierTransform(const FieldSpec& spec, const Embedding& emb,
                                             int max_degree)
    : emb_(emb), base_(spec, max_degree) {
  if (spec.dim != emb.dim()) {
    throw DimensionError("ImageFourierTransform: field and embedding dimensions differ");
  }
}

DualPolynomial ImageFourierTransform::operator()(const FockVector& t_side) const {
  // 𝒦 is the coordinate identity in the t-basis.
  const DualPolynomial h_side = base_.forward(t_side);
  return pullback_u_inverse(emb_, h_side);
}

DualPolynomial i_k(const FieldSpec& spec, const Embedding& emb, const FockVector& t_side) {
  return ImageFourierTransform(spec, emb, t_side.cutoff())(t_side);
}

QEigenvector q_eigenvector(const FieldSpec& spec, const Embedding& emb, const Vector& xi, int cutoff) {
  QEigenvector out;
  out.omega = k_plus(emb, xi);
  const auto p = FourierTransform(spec, cutoff).eigenvector(xi);
  const Matrix kt = emb.matrix().transpose();
  for (int n = 0; n <= cutoff; ++n) {
    out.components.push_back(tensor_power_map(kt, n) * p[static_cast<std::size_t>(n)]);
  }
  return out;
}

double q_eigenvector_residual(const FieldSpec& spec, const Embedding& emb, const Vector& xi,
                              int cutoff) {
  return q_eigenvector_residual(spec, emb, conjugated_field(spec, emb), xi, cutoff);
}

double q_eigenvector_residual(const FieldSpec& spec, const Embedding& emb, const FieldSpec& conjugated,
                              const Vector& xi, int cutoff) {
  if (cutoff < 1) {
    throw TruncationError("q_eigenvector_residual: cutoff must be at least 1");
  }
  const QEigenvector q = q_eigenvector(spec, emb, xi, cutoff);
  const Vector qflat = concat_levels(q.components);
  const BigK kk(emb, cutoff);
  std::vector<Matrix> to_t;
  std::vector<Matrix> to_std;
  for (int n = 0; n <= cutoff; ++n) {
    to_t.push_back(kk.standard(n));
    to_std.push_back(kk.standard_inverse(n));
  }
  const Matrix b = block_diagonal(to_t);
  const Matrix b_inv = block_diagonal(to_std);
  const auto safe = as_index(fock_dimension(spec.dim, cutoff - 1));
  double worst = 0.0;
  for (int i = 0; i < spec.dim; ++i) {
    const Vector f = Vector::Unit(spec.dim, i);
    // J_K in standard coordinates is B⁻¹ J_K B; only its transpose applied to Q is needed.
    const Matrix j_t = assemble_operator(conjugated, f, cutoff).matrix();
    const Vector lhs = (b.transpose() * (j_t.transpose() * (b_inv.transpose() * qflat))).head(safe);
    const Vector rhs = q.omega.dot(f) * qflat.head(safe);
    const double scale = lhs.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
    const double err = (lhs - rhs).cwiseAbs().maxCoeff();
    worst = std::max(worst, scale > 0.0 ? err / scale : err);
  }
  return worst;
}

}  // namespace fockbench
