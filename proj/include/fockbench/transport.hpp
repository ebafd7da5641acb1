#pragma once

// Transport of a Jacobi field along an injective embedding K : T₊ -> H₊.
//
// Coordinates used throughout:
//   * f ∈ T is given in the standard coordinates of R^d; (f, g)_T = (Kf)·(Kg).
//   * T-side Fock levels are stored in the orthonormal pullback basis
//     t_i = K⁻¹ e_i, in which the second-quantized unitary 𝒦 = ⊕ K̄^{⊗n} is the
//     coordinate identity.
//   * The per-block entry formulas are evaluated in the T-orthonormal frame
//     s_i = V Σ⁻¹ e_i from K = U Σ V^T, where K̄ has the orthogonal matrix U,
//     and then carried to the t-basis by U^T. Working in standard
//     coordinates through tensor powers of K loses roughly cond(K)^(2n).
//   * Points of T₋ use functional coordinates (pairing = dot product), so
//     K⁺ acts as K^T.

#include <memory>
#include <vector>

#include "fockbench/fields.hpp"
#include "fockbench/spectral.hpp"

namespace fockbench {

class Embedding {
 public:
  /// Throws DimensionError for a non-square K and SingularError when the
  /// smallest singular value vanishes numerically.
  explicit Embedding(Matrix k);

  int dim() const { return static_cast<int>(k_.rows()); }
  const Matrix& matrix() const { return k_; }
  const Matrix& inverse() const { return k_inv_; }
  /// G_T = K^T K.
  const Matrix& t_gram() const { return gram_; }
  /// Columns t_i = K⁻¹ e_i, an orthonormal basis of T.
  const Matrix& t_basis() const { return k_inv_; }
  const Vector& singular_values() const { return singular_values_; }
  double condition_number() const;

  double t_inner(const Vector& f, const Vector& g) const;
  /// T-metric representer of a functional: the g with (g, ·)_T = ⟨ω, ·⟩.
  Vector to_t_metric(const Vector& omega) const;

 private:
  Matrix k_;
  Matrix k_inv_;
  Matrix gram_;
  Vector singular_values_;
};

/// ω = K⁺ξ, defined by ⟨K⁺ξ, f⟩_T = ⟨ξ, Kf⟩_H.
Vector k_plus(const Embedding& emb, const Vector& xi);

/// Level maps of 𝒦 = ⊕ K̄^{⊗n} up to a cutoff.
class BigK {
 public:
  BigK(const Embedding& emb, int cutoff);

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  /// S_n: standard T coordinates -> H coordinates.
  const Matrix& standard(int n) const { return standard_.at(static_cast<std::size_t>(n)); }
  /// S_n⁻¹, computed as tensor_power_map(K⁻¹, n).
  const Matrix& standard_inverse(int n) const {
    return standard_inv_.at(static_cast<std::size_t>(n));
  }
  /// T-metric Gram of the standard basis at level n, tensor_power_map(G_T, n).
  const Matrix& level_gram(int n) const { return gram_.at(static_cast<std::size_t>(n)); }

  /// 𝒦F for F in t-basis coordinates.
  FockVector apply(const FockVector& t_side) const;
  FockVector apply_inverse(const FockVector& h_side) const;
  FockVector standard_to_t(const FockVector& standard) const;
  FockVector t_to_standard(const FockVector& t_side) const;

  /// max_n ‖S_n^T S_n - G_n‖ / ‖G_n‖ (max-norms): 𝒦*𝒦 = Id in the T metric.
  double unitarity_residual() const;

 private:
  int dim_;
  int cutoff_;
  std::vector<Matrix> standard_;
  std::vector<Matrix> standard_inv_;
  std::vector<Matrix> gram_;
};

BigK big_k(const Embedding& emb, int cutoff);

/// J_K built from the entry formulas
///   α_n(f) = (K̄^{⊗(n+1)})⁻¹ a_n(Kf) K̄^{⊗n},  β_n(f) = (K̄^{⊗n})⁻¹ b_n(Kf) K̄^{⊗n},
///   α_n*(f) = adjoint of α_n(f) in the T metric,
/// each evaluated in standard coordinates and reported in the t-basis. The
/// index f is in standard T coordinates.
FieldSpec conjugated_field(const FieldSpec& spec, const Embedding& emb);

/// J_K(f) = 𝒦⁻¹ J(Kf) 𝒦, which in t-basis coordinates is J(Kf) itself.
AssembledOperator conjugated_operator(const FieldSpec& spec, const Embedding& emb, const Vector& f,
                                      int cutoff);

struct ConjugationCheck {
  AssembledOperator global;
  AssembledOperator entrywise;
  double max_abs_diff = 0.0;
};

/// Assembles J_K(f) both ways and throws std::runtime_error when they
/// disagree beyond `tolerance`.
ConjugationCheck compare_conjugations(const FieldSpec& spec, const Embedding& emb,
                                      const Vector& f, int cutoff, double tolerance = 1e-10);

/// (Uq)(ξ) = q(K⁺ξ): coefficients c_j ↦ S_j c_j.
DualPolynomial pullback_u(const Embedding& emb, const DualPolynomial& q);
/// U⁻¹ on polynomials: a_j ↦ S_j⁻¹ a_j. Throws SingularError if a coefficient
/// is not in the range of S_j.
DualPolynomial pullback_u_inverse(const Embedding& emb, const DualPolynomial& p);

/// I_K = U⁻¹ I 𝒦, prepared once for repeated use.
class ImageFourierTransform {
 public:
  ImageFourierTransform(const FieldSpec& spec, const Embedding& emb, int max_degree);

  const FourierTransform& base() const { return base_; }
  const Embedding& embedding() const { return emb_; }
  DualPolynomial operator()(const FockVector& t_side) const;

 private:
  Embedding emb_;
  FourierTransform base_;
};

DualPolynomial i_k(const FieldSpec& spec, const Embedding& emb, const FockVector& t_side);

struct QEigenvector {
  /// ω = K⁺ξ.
  Vector omega;
  /// Q_n = (K^T)^{⊗n} P_n(ξ), functional coordinates (pairs with standard T
  /// coordinates).
  std::vector<Vector> components;
};

QEigenvector q_eigenvector(const FieldSpec& spec, const Embedding& emb, const Vector& xi, int cutoff);

/// Largest relative residual of ⟨Q(ω), J_K(f)F⟩_T - ⟨ω, f⟩_T ⟨Q(ω), F⟩_T over
/// standard basis directions f and standard-coordinate basis tensors F of
/// degree ≤ N-1. J_K is the entry-formula field.
double q_eigenvector_residual(const FieldSpec& spec, const Embedding& emb, const Vector& xi,
                              int cutoff);
/// Same, reusing a conjugated field prepared by conjugated_field(spec, emb).
double q_eigenvector_residual(const FieldSpec& spec, const Embedding& emb, const FieldSpec& conjugated,
                              const Vector& xi, int cutoff);

}  // namespace fockbench
