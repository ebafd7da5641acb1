#pragma once

// Truncated symmetric Fock space over R^d.
//
// Level n is stored in the orthonormal basis
//   E_α = sqrt(n!/α!) · Sym(e_1^{⊗α_1} ⊗ ... ⊗ e_d^{⊗α_d}),  |α| = n,
// where Sym averages over all n! slot permutations and the inner product is
// the restriction of the full tensor-power inner product. In these
// coordinates the ladder operators take the familiar form
//   create(e_i) E_α    = sqrt(α_i + 1) E_{α+δ_i}
//   annihilate(e_i) E_α = sqrt(α_i) E_{α-δ_i}.

#include <Eigen/Dense>
#include <vector>

#include "fockbench/multi_index.hpp"

namespace fockbench {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Coefficient vector of a degree-n symmetric tensor over R^d in the E_α basis.
class SymTensor {
 public:
  SymTensor(int dim, int degree);
  SymTensor(int dim, int degree, Vector coeffs);

  static SymTensor basis(const MultiIndex& alpha);
  /// Level-0 tensor holding a scalar.
  static SymTensor scalar(int dim, double value);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }
  const Vector& coeffs() const { return coeffs_; }
  double coeff(const MultiIndex& alpha) const;
  double norm() const { return coeffs_.norm(); }

 private:
  int dim_;
  int degree_;
  Vector coeffs_;
};

/// Graded vector (Φ_0, ..., Φ_N) of the Fock space truncated at cutoff N.
class FockVector {
 public:
  FockVector(int dim, int cutoff);

  static FockVector vacuum(int dim, int cutoff);
  static FockVector from_flat(int dim, int cutoff, const Vector& flat);
  /// Basis vector E_α placed at level |α|.
  static FockVector basis(const MultiIndex& alpha, int cutoff);

  int dim() const { return dim_; }
  int cutoff() const { return static_cast<int>(levels_.size()) - 1; }
  const SymTensor& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }
  void set_level(SymTensor tensor);

  /// Levels concatenated in degree order, length fock_dimension(d, N).
  Vector flat() const;
  double norm() const;
  /// Highest level carrying a nonzero coefficient (-1 for the zero vector).
  int top_degree() const;

 private:
  int dim_;
  std::vector<SymTensor> levels_;
};

double inner(const FockVector& a, const FockVector& b);

/// Matrix of create(φ) : level n -> level n+1, i.e. sqrt(n+1)·Sym(φ ⊗ ·).
Matrix create_matrix(const Vector& phi, int n);
/// Matrix of annihilate(φ) : level n+1 -> level n, built from its own
/// coordinate formula (it coincides with the transpose of create_matrix).
Matrix annihilate_matrix(const Vector& phi, int n);

SymTensor create(const Vector& phi, const SymTensor& tensor);
SymTensor annihilate(const Vector& phi, const SymTensor& tensor);

/// dΓ(B) on level n: Σ_k Id^{⊗(k-1)} ⊗ B ⊗ Id^{⊗(n-k)} restricted to
/// symmetric tensors, equal to Σ_ij B_ij create(e_i) annihilate(e_j).
Matrix second_quantization(const Matrix& B, int n);

/// A^{⊗n} restricted to the symmetric subspace of level n.
Matrix tensor_power_map(const Matrix& A, int n);

}  // namespace fockbench
