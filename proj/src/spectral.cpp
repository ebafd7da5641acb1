#include "fockbench/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "fockbench/errors.hpp"

namespace fockbench {

namespace {

Eigen::Index as_index(std::size_t k) { return static_cast<Eigen::Index>(k); }

constexpr double kSingularCondition = 1e14;

}  // namespace

Vector monomial_values(const Vector& xi, int n) {
  const int d = static_cast<int>(xi.size());
  const auto& basis = level_basis(d, n);
  Vector out(as_index(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const MultiIndex& alpha = basis[k];
    double value = std::sqrt(factorial(n) / multi_factorial(alpha));
    for (int i = 0; i < d; ++i) {
      value *= std::pow(xi[i], alpha[i]);
    }
    out[as_index(k)] = value;
  }
  return out;
}

DualPolynomial::DualPolynomial(int dim, std::vector<Vector> coeffs, Side side)
    : dim_(dim), coeffs_(std::move(coeffs)), side_(side) {
  if (coeffs_.empty()) {
    coeffs_.push_back(Vector::Zero(1));
  }
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (static_cast<std::size_t>(coeffs_[j].size()) != level_dimension(dim, static_cast<int>(j))) {
      throw DimensionError("DualPolynomial: coefficient of degree " + std::to_string(j) +
                           " has the wrong length");
    }
  }
}

DualPolynomial DualPolynomial::constant(int dim, double value, Side side) {
  return {dim, {Vector::Constant(1, value)}, side};
}

DualPolynomial DualPolynomial::linear(const Vector& f, Side side) {
  const int d = static_cast<int>(f.size());
  // level-1 basis is (e_1, ..., e_d) in order, and ⟨ξ, E_{δ_i}⟩ = ξ_i
  return {d, {Vector::Zero(1), f}, side};
}

DualPolynomial DualPolynomial::from_flat(int dim, int degree, const Vector& flat, Side side) {
  if (static_cast<std::size_t>(flat.size()) != fock_dimension(dim, degree)) {
    throw DimensionError("DualPolynomial::from_flat: length mismatch");
  }
  std::vector<Vector> coeffs;
  for (int j = 0; j <= degree; ++j) {
    coeffs.push_back(flat.segment(as_index(level_offset(dim, j)), as_index(level_dimension(dim, j))));
  }
  return {dim, std::move(coeffs), side};
}

double DualPolynomial::operator()(const Vector& xi) const {
  if (xi.size() != dim_) {
    throw DimensionError("DualPolynomial: evaluation point has the wrong dimension");
  }
  double out = 0.0;
  for (int j = 0; j <= degree(); ++j) {
    out += monomial_values(xi, j).dot(coeffs_[static_cast<std::size_t>(j)]);
  }
  return out;
}

Vector DualPolynomial::flat(int max_degree) const {
  if (max_degree < degree()) {
    throw DimensionError("DualPolynomial::flat: degree " + std::to_string(degree()) +
                         " exceeds " + std::to_string(max_degree));
  }
  Vector out = Vector::Zero(as_index(fock_dimension(dim_, max_degree)));
  for (int j = 0; j <= degree(); ++j) {
    const auto& c = coeffs_[static_cast<std::size_t>(j)];
    out.segment(as_index(level_offset(dim_, j)), c.size()) = c;
  }
  return out;
}

DualPolynomial DualPolynomial::times_linear(const Vector& phi) const {
  if (phi.size() != dim_) {
    throw DimensionError("DualPolynomial::times_linear: dimension mismatch");
  }
  // ⟨ξ, φ⟩⟨ξ^{⊗j}, c⟩ = ⟨ξ^{⊗(j+1)}, Sym(φ ⊗ c)⟩ = ⟨ξ^{⊗(j+1)}, create(φ)c / sqrt(j+1)⟩
  std::vector<Vector> out;
  out.push_back(Vector::Zero(1));
  for (int j = 0; j <= degree(); ++j) {
    out.push_back(create_matrix(phi, j) * coeffs_[static_cast<std::size_t>(j)] /
                  std::sqrt(j + 1.0));
  }
  return {dim_, std::move(out), side_};
}

DualPolynomial DualPolynomial::operator+(const DualPolynomial& other) const {
  if (other.dim_ != dim_ || other.side_ != side_) {
    throw DimensionError("DualPolynomial: incompatible operands");
  }
  const int n = std::max(degree(), other.degree());
  return from_flat(dim_, n, flat(n) + other.flat(n), side_);
}

DualPolynomial DualPolynomial::operator-(const DualPolynomial& other) const {
  return *this + other * -1.0;
}

DualPolynomial DualPolynomial::operator*(double s) const {
  std::vector<Vector> out;
  for (const auto& c : coeffs_) {
    out.push_back(s * c);
  }
  return {dim_, std::move(out), side_};
}

Matrix RegularityOperator::level(int m) const {
  return columns.middleRows(as_index(level_offset(dim, m)), as_index(level_dimension(dim, m)));
}

FourierTransform::FourierTransform(const FieldSpec& spec, int max_degree, double warn_condition)
    : dim_(spec.dim), max_degree_(max_degree) {
  if (max_degree < 0) {
    throw DimensionError("FourierTransform: negative degree");
  }
  MixedProducts products(spec, max_degree);
  for (int n = 0; n <= max_degree; ++n) {
    const auto& basis = level_basis(dim_, n);
    RegularityOperator v;
    v.degree = n;
    v.dim = dim_;
    v.columns.resize(as_index(fock_dimension(dim_, n)), as_index(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      // E_α = sqrt(n!/α!) e^{⊗̂α} and V_n e^{⊗̂α} = Π J(e_i)^{α_i} Ω
      const double scale = std::sqrt(factorial(n) / multi_factorial(basis[k]));
      v.columns.col(as_index(k)) = scale * products.vector(basis[k]).head(v.columns.rows());
    }
    const Matrix top = v.top();
    Eigen::JacobiSVD<Matrix> svd(top);
    const auto& s = svd.singularValues();
    const double smallest = s[s.size() - 1];
    const double cond = smallest > 0.0 ? s[0] / smallest : std::numeric_limits<double>::infinity();
    conditions_.push_back(cond);
    if (!std::isfinite(cond) || cond > kSingularCondition) {
      throw SingularError("V_{" + std::to_string(n) + "," + std::to_string(n) +
                          "} is numerically singular (condition number " + std::to_string(cond) +
                          ")");
    }
    if (cond > warn_condition) {
      std::ostringstream msg;
      msg << "V_{" << n << "," << n << "} condition number " << cond << " exceeds "
          << warn_condition;
      warnings_.push_back(msg.str());
    }
    top_lu_.emplace_back(top);
    regularity_.push_back(std::move(v));
  }
}

const RegularityOperator& FourierTransform::regularity(int n) const {
  if (n < 0 || n > max_degree_) {
    throw TruncationError("FourierTransform: V_" + std::to_string(n) + " not available");
  }
  return regularity_[static_cast<std::size_t>(n)];
}

DualPolynomial FourierTransform::forward(const FockVector& phi) const {
  if (phi.dim() != dim_) {
    throw DimensionError("FourierTransform::forward: dimension mismatch");
  }
  const int n = phi.cutoff();
  if (n > max_degree_) {
    throw TruncationError("FourierTransform::forward: input degree exceeds the prepared degree");
  }
  Vector residual = phi.flat();
  std::vector<Vector> coeffs(static_cast<std::size_t>(n) + 1);
  for (int m = n; m >= 0; --m) {
    const auto& v = regularity_[static_cast<std::size_t>(m)];
    const Vector top = residual.segment(as_index(level_offset(dim_, m)),
                                        as_index(level_dimension(dim_, m)));
    Vector f = top_lu_[static_cast<std::size_t>(m)].solve(top);
    residual.head(v.columns.rows()) -= v.columns * f;
    coeffs[static_cast<std::size_t>(m)] = std::move(f);
  }
  return {dim_, std::move(coeffs), Side::H};
}

FockVector FourierTransform::inverse(const DualPolynomial& p, int cutoff) const {
  if (p.dim() != dim_) {
    throw DimensionError("FourierTransform::inverse: dimension mismatch");
  }
  if (cutoff < p.degree()) {
    throw TruncationError("inverse_fourier: cutoff below the polynomial degree");
  }
  if (p.degree() > max_degree_) {
    throw TruncationError("inverse_fourier: polynomial degree exceeds the prepared degree");
  }
  Vector out = Vector::Zero(as_index(fock_dimension(dim_, cutoff)));
  for (int j = 0; j <= p.degree(); ++j) {
    const auto& v = regularity_[static_cast<std::size_t>(j)];
    out.head(v.columns.rows()) += v.columns * p.coeff(j);
  }
  return FockVector::from_flat(dim_, cutoff, out);
}

std::vector<Vector> FourierTransform::eigenvector(const Vector& xi) const {
  if (xi.size() != dim_) {
    throw DimensionError("eigenvector: point has the wrong dimension");
  }
  // ⟨V_n F, P(ξ)⟩ = ⟨ξ^{⊗n}, F⟩ for all F gives Σ_{m ≤ n} V_{n,m}^T P_m = w_n(ξ).
  std::vector<Vector> components;
  for (int n = 0; n <= max_degree_; ++n) {
    const auto& v = regularity_[static_cast<std::size_t>(n)];
    Vector rhs = monomial_values(xi, n);
    for (int m = 0; m < n; ++m) {
      rhs -= v.level(m).transpose() * components[static_cast<std::size_t>(m)];
    }
    components.push_back(top_lu_[static_cast<std::size_t>(n)].transpose().solve(rhs));
  }
  return components;
}

RegularityOperator v_operator(const FieldSpec& spec, int n, int cutoff) {
  if (cutoff < n) {
    throw TruncationError("v_operator: cutoff below the degree");
  }
  return FourierTransform(spec, n).regularity(n);
}

DualPolynomial fourier(const FieldSpec& spec, const FockVector& phi) {
  return FourierTransform(spec, phi.cutoff()).forward(phi);
}

FockVector inverse_fourier(const FieldSpec& spec, const DualPolynomial& p, int cutoff) {
  if (cutoff < p.degree()) {
    throw TruncationError("inverse_fourier: cutoff below the polynomial degree");
  }
  return FourierTransform(spec, p.degree()).inverse(p, cutoff);
}

std::vector<SymTensor> eigenvector(const FieldSpec& spec, const Vector& xi, int cutoff) {
  const auto components = FourierTransform(spec, cutoff).eigenvector(xi);
  std::vector<SymTensor> out;
  for (int n = 0; n <= cutoff; ++n) {
    out.emplace_back(spec.dim, n, components[static_cast<std::size_t>(n)]);
  }
  return out;
}

double eigenvector_residual(const FieldSpec& spec, const Vector& xi, int cutoff) {
  if (cutoff < 1) {
    throw TruncationError("eigenvector_residual: cutoff must be at least 1");
  }
  const FourierTransform transform(spec, cutoff);
  const auto components = transform.eigenvector(xi);
  Vector p(as_index(fock_dimension(spec.dim, cutoff)));
  for (int n = 0; n <= cutoff; ++n) {
    p.segment(as_index(level_offset(spec.dim, n)), components[static_cast<std::size_t>(n)].size()) =
        components[static_cast<std::size_t>(n)];
  }
  const auto safe = as_index(fock_dimension(spec.dim, cutoff - 1));
  double worst = 0.0;
  for (int i = 0; i < spec.dim; ++i) {
    const Matrix j = assemble_operator(spec, Vector::Unit(spec.dim, i), cutoff).matrix();
    const Vector lhs = (j.transpose() * p).head(safe);
    const Vector rhs = xi[i] * p.head(safe);
    const double scale = lhs.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
    const double err = (lhs - rhs).cwiseAbs().maxCoeff();
    worst = std::max(worst, scale > 0.0 ? err / scale : err);
  }
  return worst;
}

}  // namespace fockbench
