#pragma once

// Exact Gram matrices of monomials under ρ (or ρ_K), block Gram–Schmidt into
// chaos levels, and projections onto them. Every integral is a vacuum moment
// of the field; nothing here samples.

#include <string>
#include <vector>

#include "fockbench/fields.hpp"
#include "fockbench/spectral.hpp"
#include "fockbench/transport.hpp"

namespace fockbench {

/// The monomial ξ ↦ ⟨ξ^{⊗j}, E_α⟩ with j = |α|.
struct MonomialLabel {
  MultiIndex alpha;
  int degree() const { return alpha.degree(); }
};

struct MonomialGram {
  int dim = 0;
  int degree = 0;
  Side side = Side::H;
  /// Graded order: degree 0, then degree 1, ... matching DualPolynomial::flat.
  std::vector<MonomialLabel> labels;
  Matrix gram;
};

/// Gram matrix of all monomials of degree ≤ n under the spectral measure of
/// `spec`. Requires cutoff ≥ 2n.
MonomialGram monomial_gram(const FieldSpec& spec, int n, int cutoff, Side side = Side::H);
/// T-side Gram under ρ_K, computed from vacuum moments of J_K.
MonomialGram monomial_gram(const FieldSpec& spec, const Embedding& emb, int n, int cutoff);

/// Smallest eigenvalue of a Gram matrix below this fraction of the largest is
/// treated as numerically singular.
inline constexpr double kGramRankTolerance = 1e-10;

struct ChaosLevel {
  int degree = 0;
  /// Columns are orthonormal polynomials in monomial coordinates.
  Matrix vectors;
};

class ChaosBasis {
 public:
  ChaosBasis(MonomialGram gram, std::vector<ChaosLevel> levels);

  int dim() const { return gram_.dim; }
  int max_degree() const { return gram_.degree; }
  Side side() const { return gram_.side; }
  const MonomialGram& gram() const { return gram_; }
  const ChaosLevel& level(int m) const { return levels_.at(static_cast<std::size_t>(m)); }
  int level_count() const { return static_cast<int>(levels_.size()); }

  /// k-th orthonormal polynomial of level m.
  DualPolynomial polynomial(int m, int k) const;
  /// ∫ p q dρ via the exact Gram.
  double inner(const DualPolynomial& p, const DualPolynomial& q) const;
  double inner(const Vector& p, const Vector& q) const { return p.dot(gram_.gram * q); }
  /// max |⟨u, v⟩| over basis vectors u, v from different levels.
  double max_cross_level() const;
  /// max |⟨u, v⟩ - δ_uv| over all basis vectors.
  double orthonormality_defect() const;

 private:
  MonomialGram gram_;
  std::vector<ChaosLevel> levels_;
};

/// Modified Gram–Schmidt with one reorthogonalization pass, level by level in
/// increasing degree. Throws SingularError naming the first level at which the
/// Gram loses positive definiteness.
ChaosBasis chaotic_subspaces(const MonomialGram& gram);

struct ChaosProjection {
  /// Coefficients of p against each level's orthonormal basis.
  std::vector<Vector> components;
  /// ‖component‖ per level in L².
  std::vector<double> level_norms;
  /// L² norm of p minus its reconstruction.
  double residual = 0.0;
};

ChaosProjection project(const ChaosBasis& basis, const DualPolynomial& p);

}  // namespace fockbench
