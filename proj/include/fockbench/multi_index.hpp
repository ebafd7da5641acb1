#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace fockbench {

/// Multi-index α = (α_1, ..., α_d). Labels the orthonormal basis vector E_α of
/// the symmetric tensor power of degree |α| = α_1 + ... + α_d.
struct MultiIndex {
  std::vector<int> entries;

  int dim() const { return static_cast<int>(entries.size()); }
  int degree() const;
  int operator[](int i) const { return entries[static_cast<std::size_t>(i)]; }

  MultiIndex plus(int i) const;
  MultiIndex minus(int i) const;

  auto operator<=>(const MultiIndex&) const = default;
};

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);

std::size_t binomial(int n, int k);
double factorial(int n);
/// α! = Π α_i!
double multi_factorial(const MultiIndex& alpha);

/// Number of multi-indices of degree n in d variables, C(n+d-1, d-1).
std::size_t level_dimension(int d, int n);
/// Σ_{m ≤ cutoff} level_dimension(d, m).
std::size_t fock_dimension(int d, int cutoff);
/// Position of level n inside the flattened Fock vector.
std::size_t level_offset(int d, int n);

/// All α with |α| = n, in graded lexicographic order: α precedes β when α is
/// lexicographically larger, so (2,0) < (1,1) < (0,2). The enumeration is
/// deterministic and duplicate-free.
std::vector<MultiIndex> enumerate_basis(int d, int n);

/// Ordered basis of one Fock level with O(log) index lookup.
class LevelBasis {
 public:
  LevelBasis(int d, int n);

  int dim() const { return d_; }
  int degree() const { return n_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  std::size_t index_of(const MultiIndex& alpha) const;

 private:
  int d_;
  int n_;
  std::vector<MultiIndex> indices_;
};

/// Process-wide cached basis. Safe to call from multiple threads; the returned
/// reference stays valid for the program lifetime.
const LevelBasis& level_basis(int d, int n);

}  // namespace fockbench
