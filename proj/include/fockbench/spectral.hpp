#pragma once

// Regularity operators V_n, the Fourier transform I between the Fock space
// and polynomials on the dual space, its inverse, and the generalized joint
// eigenvectors P(ξ).
//
// Dual-space points are stored in functional coordinates: ⟨ξ, φ⟩ = Σ ξ_i φ_i.
// A polynomial of degree n is a list of symmetric tensors (c_0, ..., c_n) and
// evaluates as Σ_j ⟨ξ^{⊗j}, c_j⟩, where ⟨ξ^{⊗j}, E_α⟩ = sqrt(j!/α!) Π ξ_i^{α_i}.

#include <string>
#include <vector>

#include "fockbench/fields.hpp"

namespace fockbench {

/// Which dual space a polynomial lives on: H₋ (spectral measure ρ) or T₋
/// (image measure ρ_K).
enum class Side { H, T };

/// Values ⟨ξ^{⊗n}, E_α⟩ for all |α| = n, in level order.
Vector monomial_values(const Vector& xi, int n);

class DualPolynomial {
 public:
  DualPolynomial(int dim, std::vector<Vector> coeffs, Side side = Side::H);

  static DualPolynomial constant(int dim, double value, Side side = Side::H);
  /// ξ ↦ ⟨ξ, f⟩.
  static DualPolynomial linear(const Vector& f, Side side = Side::H);
  /// Inverse of flat(): coefficients concatenated by degree.
  static DualPolynomial from_flat(int dim, int degree, const Vector& flat, Side side = Side::H);

  int dim() const { return dim_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Side side() const { return side_; }
  const std::vector<Vector>& coeffs() const { return coeffs_; }
  const Vector& coeff(int j) const { return coeffs_.at(static_cast<std::size_t>(j)); }

  double operator()(const Vector& xi) const;

  /// Coefficients over the monomial family {⟨·^{⊗j}, E_α⟩ : j ≤ max_degree},
  /// zero-padded above degree().
  Vector flat(int max_degree) const;

  /// ξ ↦ ⟨ξ, φ⟩ · p(ξ).
  DualPolynomial times_linear(const Vector& phi) const;

  DualPolynomial operator+(const DualPolynomial& other) const;
  DualPolynomial operator-(const DualPolynomial& other) const;
  DualPolynomial operator*(double s) const;

 private:
  int dim_;
  std::vector<Vector> coeffs_;
  Side side_;
};

/// V_n as a map from level n into levels 0..n of the Fock space.
struct RegularityOperator {
  int degree = 0;
  int dim = 0;
  /// fock_dimension(d, n) × level_dimension(d, n); column α is V_n E_α.
  Matrix columns;

  /// Rows of level m.
  Matrix level(int m) const;
  /// Diagonal part V_{n,n}.
  Matrix top() const { return level(degree); }
};

/// Fourier transform of one Jacobi field, truncated at a maximal degree. All
/// V_n, n ≤ max_degree, are computed once at construction.
class FourierTransform {
 public:
  /// Throws SingularError if some V_{n,n} is numerically singular. Condition
  /// numbers above `warn_condition` are recorded in warnings().
  FourierTransform(const FieldSpec& spec, int max_degree, double warn_condition = 1e8);

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  const RegularityOperator& regularity(int n) const;
  const std::vector<double>& condition_numbers() const { return conditions_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// IΦ by back-substitution from the top level down. The result has degree
  /// Φ.cutoff(); Φ.cutoff() must not exceed max_degree().
  DualPolynomial forward(const FockVector& phi) const;
  /// I⁻¹p = Σ_j V_j c_j, placed in a Fock vector with the given cutoff.
  FockVector inverse(const DualPolynomial& p, int cutoff) const;
  /// Components P_0(ξ), ..., P_N(ξ) with N = max_degree().
  std::vector<Vector> eigenvector(const Vector& xi) const;

 private:
  int dim_;
  int max_degree_;
  std::vector<RegularityOperator> regularity_;
  std::vector<Eigen::PartialPivLU<Matrix>> top_lu_;
  std::vector<double> conditions_;
  std::vector<std::string> warnings_;
};

RegularityOperator v_operator(const FieldSpec& spec, int n, int cutoff);
DualPolynomial fourier(const FieldSpec& spec, const FockVector& phi);
FockVector inverse_fourier(const FieldSpec& spec, const DualPolynomial& p, int cutoff);
std::vector<SymTensor> eigenvector(const FieldSpec& spec, const Vector& xi, int cutoff);

/// Largest relative residual of ⟨P(ξ), J(φ)Φ⟩ - ⟨ξ, φ⟩⟨P(ξ), Φ⟩ over the
/// coordinate directions φ = e_i and the Fock basis vectors Φ of degree ≤ N-1.
double eigenvector_residual(const FieldSpec& spec, const Vector& xi, int cutoff);

}  // namespace fockbench
