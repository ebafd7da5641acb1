#include "fockbench/fock.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "fockbench/errors.hpp"

namespace fockbench {

namespace {

Eigen::Index as_index(std::size_t k) { return static_cast<Eigen::Index>(k); }

void require_square(const Matrix& A, const char* what) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    throw DimensionError(std::string(what) + ": operator must be square and nonempty");
  }
}

}  // namespace

SymTensor::SymTensor(int dim, int degree)
    : dim_(dim), degree_(degree), coeffs_(Vector::Zero(as_index(level_dimension(dim, degree)))) {}

SymTensor::SymTensor(int dim, int degree, Vector coeffs)
    : dim_(dim), degree_(degree), coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != level_dimension(dim, degree)) {
    throw DimensionError("SymTensor: coefficient count " + std::to_string(coeffs_.size()) +
                         " does not match C(n+d-1, d-1) = " +
                         std::to_string(level_dimension(dim, degree)));
  }
}

SymTensor SymTensor::basis(const MultiIndex& alpha) {
  SymTensor out(alpha.dim(), alpha.degree());
  out.coeffs_[as_index(level_basis(alpha.dim(), alpha.degree()).index_of(alpha))] = 1.0;
  return out;
}

SymTensor SymTensor::scalar(int dim, double value) {
  SymTensor out(dim, 0);
  out.coeffs_[0] = value;
  return out;
}

double SymTensor::coeff(const MultiIndex& alpha) const {
  return coeffs_[as_index(level_basis(dim_, degree_).index_of(alpha))];
}

FockVector::FockVector(int dim, int cutoff) : dim_(dim) {
  if (cutoff < 0) {
    throw DimensionError("FockVector: negative cutoff");
  }
  levels_.reserve(static_cast<std::size_t>(cutoff) + 1);
  for (int n = 0; n <= cutoff; ++n) {
    levels_.emplace_back(dim, n);
  }
}

FockVector FockVector::vacuum(int dim, int cutoff) {
  FockVector out(dim, cutoff);
  out.levels_[0] = SymTensor::scalar(dim, 1.0);
  return out;
}

FockVector FockVector::from_flat(int dim, int cutoff, const Vector& flat) {
  if (static_cast<std::size_t>(flat.size()) != fock_dimension(dim, cutoff)) {
    throw DimensionError("FockVector::from_flat: length mismatch");
  }
  FockVector out(dim, cutoff);
  for (int n = 0; n <= cutoff; ++n) {
    const auto off = as_index(level_offset(dim, n));
    const auto len = as_index(level_dimension(dim, n));
    out.levels_[static_cast<std::size_t>(n)] = SymTensor(dim, n, flat.segment(off, len));
  }
  return out;
}

FockVector FockVector::basis(const MultiIndex& alpha, int cutoff) {
  if (alpha.degree() > cutoff) {
    throw TruncationError("FockVector::basis: degree exceeds cutoff");
  }
  FockVector out(alpha.dim(), cutoff);
  out.set_level(SymTensor::basis(alpha));
  return out;
}

void FockVector::set_level(SymTensor tensor) {
  if (tensor.dim() != dim_) {
    throw DimensionError("FockVector::set_level: dimension mismatch");
  }
  if (tensor.degree() > cutoff()) {
    throw TruncationError("FockVector::set_level: degree exceeds cutoff");
  }
  levels_[static_cast<std::size_t>(tensor.degree())] = std::move(tensor);
}

Vector FockVector::flat() const {
  Vector out(as_index(fock_dimension(dim_, cutoff())));
  for (int n = 0; n <= cutoff(); ++n) {
    const auto& coeffs = levels_[static_cast<std::size_t>(n)].coeffs();
    out.segment(as_index(level_offset(dim_, n)), coeffs.size()) = coeffs;
  }
  return out;
}

double FockVector::norm() const {
  double sq = 0.0;
  for (const auto& level : levels_) {
    sq += level.coeffs().squaredNorm();
  }
  return std::sqrt(sq);
}

int FockVector::top_degree() const {
  for (int n = cutoff(); n >= 0; --n) {
    if (!levels_[static_cast<std::size_t>(n)].coeffs().isZero(0.0)) {
      return n;
    }
  }
  return -1;
}

double inner(const FockVector& a, const FockVector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("inner: dimension mismatch");
  }
  double out = 0.0;
  for (int n = 0; n <= std::min(a.cutoff(), b.cutoff()); ++n) {
    out += a.level(n).coeffs().dot(b.level(n).coeffs());
  }
  return out;
}

Matrix create_matrix(const Vector& phi, int n) {
  const int d = static_cast<int>(phi.size());
  if (d < 1 || n < 0) {
    throw DimensionError("create_matrix: need d >= 1 and n >= 0");
  }
  const auto& src = level_basis(d, n);
  const auto& dst = level_basis(d, n + 1);
  Matrix out = Matrix::Zero(as_index(dst.size()), as_index(src.size()));
  for (std::size_t col = 0; col < src.size(); ++col) {
    const MultiIndex& alpha = src[col];
    for (int i = 0; i < d; ++i) {
      if (phi[i] == 0.0) {
        continue;
      }
      const auto row = dst.index_of(alpha.plus(i));
      out(as_index(row), as_index(col)) += phi[i] * std::sqrt(alpha[i] + 1.0);
    }
  }
  return out;
}

Matrix annihilate_matrix(const Vector& phi, int n) {
  const int d = static_cast<int>(phi.size());
  if (d < 1 || n < 0) {
    throw DimensionError("annihilate_matrix: need d >= 1 and n >= 0");
  }
  const auto& src = level_basis(d, n + 1);
  const auto& dst = level_basis(d, n);
  Matrix out = Matrix::Zero(as_index(dst.size()), as_index(src.size()));
  for (std::size_t col = 0; col < src.size(); ++col) {
    const MultiIndex& alpha = src[col];
    for (int i = 0; i < d; ++i) {
      if (alpha[i] == 0 || phi[i] == 0.0) {
        continue;
      }
      const auto row = dst.index_of(alpha.minus(i));
      out(as_index(row), as_index(col)) += phi[i] * std::sqrt(static_cast<double>(alpha[i]));
    }
  }
  return out;
}

SymTensor create(const Vector& phi, const SymTensor& tensor) {
  if (phi.size() != tensor.dim()) {
    throw DimensionError("create: dimension mismatch");
  }
  return {tensor.dim(), tensor.degree() + 1, create_matrix(phi, tensor.degree()) * tensor.coeffs()};
}

SymTensor annihilate(const Vector& phi, const SymTensor& tensor) {
  if (phi.size() != tensor.dim()) {
    throw DimensionError("annihilate: dimension mismatch");
  }
  if (tensor.degree() < 1) {
    throw DimensionError("annihilate: degree-0 input has no lower level");
  }
  return {tensor.dim(), tensor.degree() - 1,
          annihilate_matrix(phi, tensor.degree() - 1) * tensor.coeffs()};
}

Matrix second_quantization(const Matrix& B, int n) {
  require_square(B, "second_quantization");
  if (n < 0) {
    throw DimensionError("second_quantization: negative degree");
  }
  const int d = static_cast<int>(B.rows());
  const auto& basis = level_basis(d, n);
  Matrix out = Matrix::Zero(as_index(basis.size()), as_index(basis.size()));
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const MultiIndex& alpha = basis[col];
    for (int j = 0; j < d; ++j) {
      if (alpha[j] == 0) {
        continue;
      }
      const MultiIndex lowered = alpha.minus(j);
      const double down = std::sqrt(static_cast<double>(alpha[j]));
      for (int i = 0; i < d; ++i) {
        if (B(i, j) == 0.0) {
          continue;
        }
        const auto row = basis.index_of(lowered.plus(i));
        out(as_index(row), as_index(col)) += B(i, j) * down * std::sqrt(lowered[i] + 1.0);
      }
    }
  }
  return out;
}

Matrix tensor_power_map(const Matrix& A, int n) {
  require_square(A, "tensor_power_map");
  if (n < 0) {
    throw DimensionError("tensor_power_map: negative degree");
  }
  const int d = static_cast<int>(A.rows());
  // A^{⊗n} E_α = (α!)^{-1/2} Π_i create(A e_i)^{α_i} Ω; the factorial is
  // divided out one step at a time so that A = Id reproduces Id exactly
  std::vector<std::vector<Matrix>> raise(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    for (int m = 0; m < n; ++m) {
      raise[static_cast<std::size_t>(i)].push_back(create_matrix(A.col(i), m));
    }
  }
  const auto& basis = level_basis(d, n);
  Matrix out(as_index(basis.size()), as_index(basis.size()));
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const MultiIndex& alpha = basis[col];
    Vector v = Vector::Ones(1);
    int level = 0;
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < alpha[i]; ++k) {
        v = raise[static_cast<std::size_t>(i)][static_cast<std::size_t>(level)] * v / std::sqrt(k + 1.0);
        ++level;
      }
    }
    out.col(as_index(col)) = v;
  }
  return out;
}

}  // namespace fockbench
