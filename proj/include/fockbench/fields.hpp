#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "fockbench/fock.hpp"

namespace fockbench {

enum class FieldKind { gaussian, poisson, conjugated, custom };

std::string to_string(FieldKind kind);

/// (φ, n) -> matrix of a block acting on level n.
using BlockFn = std::function<Matrix(const Vector& phi, int n)>;

/// Generators of the operator-valued Jacobi matrix
///
///        | b_0  a_0* 0    ... |
///   J =  | a_0  b_1  a_1* ... |
///        | 0    a_1  b_2  ... |
///
/// `a_block(φ, n)` maps level n to level n+1, `b_block(φ, n)` maps level n to
/// itself. `a_adjoint_block(φ, n)` maps level n+1 to level n; when left empty
/// the transpose of `a_block` is used (levels are stored in orthonormal
/// coordinates).
struct FieldSpec {
  int dim = 0;
  FieldKind kind = FieldKind::custom;
  BlockFn a_block;
  BlockFn b_block;
  BlockFn a_adjoint_block;
  /// Poisson intensities per grid node; empty for other kinds.
  std::vector<double> weights;

  Matrix a(const Vector& phi, int n) const;
  Matrix a_adjoint(const Vector& phi, int n) const;
  Matrix b(const Vector& phi, int n) const;
};

/// Free field: a_n = create, b_n = 0.
FieldSpec gaussian_field(int d);

/// Poisson field on a grid with quadrature weights w_i > 0: a_n = create,
/// b_n(φ) = dΓ(diag(φ_i / sqrt(w_i))). Level 0 carries b_0 = 0 automatically.
FieldSpec poisson_field(std::vector<double> weights);

/// Dense block-tridiagonal matrix of J(φ) on levels 0..N.
class AssembledOperator {
 public:
  AssembledOperator(int dim, int cutoff, Matrix matrix);

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  const Matrix& matrix() const { return matrix_; }
  /// Block mapping level `col_level` into level `row_level`.
  Matrix block(int row_level, int col_level) const;

  /// Components that would land above the cutoff are dropped.
  FockVector apply(const FockVector& x) const;

 private:
  int dim_;
  int cutoff_;
  Matrix matrix_;
};

AssembledOperator assemble_operator(const FieldSpec& spec, const Vector& phi, int cutoff);

/// ⟨J(φ_1) ... J(φ_n) Ω, Ω⟩ with J(φ_n) applied first. Requires cutoff >= n so
/// the product is computed without truncation loss.
double vacuum_moment(const FieldSpec& spec, std::span<const Vector> phis, int cutoff);

/// ⟨J(φ)^n Ω, Ω⟩.
double power_moment(const FieldSpec& spec, const Vector& phi, int n, int cutoff);

/// Memoized vectors Π_i J(e_i)^{γ_i} Ω for multi-indices γ with |γ| ≤ cutoff.
/// The factors commute for a Jacobi field, so the product order is fixed to
/// e_1 first. Not thread-safe: the cache grows on lookup.
class MixedProducts {
 public:
  MixedProducts(const FieldSpec& spec, int cutoff);

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  const Vector& vector(const MultiIndex& gamma);
  /// Mixed vacuum moment ⟨Π_i J(e_i)^{γ_i} Ω, Ω⟩.
  double moment(const MultiIndex& gamma) { return vector(gamma)[0]; }
  /// Sparse matrix of J(e_i) on levels 0..cutoff.
  const Eigen::SparseMatrix<double>& coordinate_operator(int i) const {
    return coordinate_ops_[static_cast<std::size_t>(i)];
  }

 private:
  int dim_;
  int cutoff_;
  std::vector<Eigen::SparseMatrix<double>> coordinate_ops_;
  std::map<MultiIndex, Vector> cache_;
};

/// Column-generator of V_{n,n}: top-level component of V_n E_α for every α
/// with |α| = n.
Matrix regularity_top_block(MixedProducts& products, int n);

/// Finite-dimensional report on the Jacobi-field conditions (a)-(e).
struct FieldReport {
  int cutoff = 0;
  double tolerance = 0.0;
  /// (a): largest |J - J^T| entry over the sampled φ; real storage makes
  /// reality automatic, so symmetry is the meaningful check.
  double max_asymmetry = 0.0;
  /// (b): largest operator norm of a_n(e_i), b_n(e_i) per level.
  std::vector<double> a_norms;
  std::vector<double> b_norms;
  /// (c): ‖[J(φ), J(ψ)]‖ restricted to levels ≤ N-2, one entry per pair.
  std::vector<double> commutator_norms;
  /// (d): largest residual of J(sφ + tψ) - sJ(φ) - tJ(ψ).
  double max_linearity_residual = 0.0;
  /// (e): condition numbers of V_{n,n}, n = 1..N.
  std::vector<double> v_condition_numbers;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

FieldReport validate_field(const FieldSpec& spec, int cutoff, double tolerance,
                           std::uint64_t seed = 20240601, int pairs = 20);

}  // namespace fockbench
