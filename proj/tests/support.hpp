#pragma once

// Hand-rolled generators and independent oracles shared by the unit tests.
// Nothing here calls the library's own tensor or moment code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fockbench/multi_index.hpp"
#include "fockbench/random.hpp"

namespace testing_support {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Deterministic per-test generator.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Vector vector(int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) {
      v[i] = normal();
    }
    return v;
  }
  Vector unit(int d) { return vector(d).normalized(); }
  Matrix matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        m(i, j) = normal();
      }
    }
    return m;
  }
  /// Invertible with singular values in [0.5, 2].
  Matrix well_conditioned(int d) {
    Eigen::HouseholderQR<Matrix> q1(matrix(d, d));
    Eigen::HouseholderQR<Matrix> q2(matrix(d, d));
    Vector s(d);
    for (int i = 0; i < d; ++i) {
      s[i] = uniform(0.5, 2.0);
    }
    return Matrix(q1.householderQ()) * s.asDiagonal() * Matrix(q2.householderQ());
  }
  fockbench::MultiIndex multi_index(int d, int n) {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    for (int k = 0; k < n; ++k) {
      ++e[static_cast<std::size_t>(integer(0, d - 1))];
    }
    return {e};
  }
  std::vector<double> weights(int d) {
    std::vector<double> w;
    for (int i = 0; i < d; ++i) {
      w.push_back(uniform(0.3, 3.0));
    }
    return w;
  }

 private:
  fockbench::Xoshiro256 rng_;
  std::normal_distribution<double> normal_;
};

/// Full (unsymmetrized) tensor power (R^d)^{⊗n} stored densely, index
/// w = (i_1, ..., i_n) with i_1 most significant.
struct DenseTensor {
  int d;
  int n;
  Vector data;

  static std::size_t size(int d, int n) {
    std::size_t s = 1;
    for (int k = 0; k < n; ++k) {
      s *= static_cast<std::size_t>(d);
    }
    return s;
  }
  DenseTensor(int d_, int n_) : d(d_), n(n_), data(Vector::Zero(static_cast<Eigen::Index>(size(d_, n_)))) {}

  std::vector<int> word(std::size_t flat) const {
    std::vector<int> w(static_cast<std::size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
      w[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(d));
      flat /= static_cast<std::size_t>(d);
    }
    return w;
  }
  std::size_t flat(const std::vector<int>& w) const {
    std::size_t f = 0;
    for (int i : w) {
      f = f * static_cast<std::size_t>(d) + static_cast<std::size_t>(i);
    }
    return f;
  }
  fockbench::MultiIndex type(std::size_t f) const {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    for (int i : word(f)) {
      ++e[static_cast<std::size_t>(i)];
    }
    return {e};
  }
};

/// E_α embedded in the full tensor power: sqrt(α!/n!) Σ over words of type α.
inline DenseTensor embed_basis(const fockbench::MultiIndex& alpha) {
  DenseTensor t(alpha.dim(), alpha.degree());
  double alpha_fact = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) {
    alpha_fact *= std::tgamma(alpha[i] + 1.0);
  }
  const double c = std::sqrt(alpha_fact / std::tgamma(alpha.degree() + 1.0));
  for (std::size_t f = 0; f < DenseTensor::size(t.d, t.n); ++f) {
    if (t.type(f) == alpha) {
      t.data[static_cast<Eigen::Index>(f)] = c;
    }
  }
  return t;
}

/// Orthogonal projection coefficient ⟨E_α, T⟩ in the full tensor power.
inline double project_basis(const DenseTensor& t, const fockbench::MultiIndex& alpha) {
  return embed_basis(alpha).data.dot(t.data);
}

/// Symmetrization over all n! slot permutations.
inline DenseTensor symmetrize(const DenseTensor& t) {
  DenseTensor out(t.d, t.n);
  std::vector<int> perm(static_cast<std::size_t>(t.n));
  std::iota(perm.begin(), perm.end(), 0);
  double count = 0.0;
  do {
    for (std::size_t f = 0; f < DenseTensor::size(t.d, t.n); ++f) {
      const auto w = t.word(f);
      std::vector<int> moved(w.size());
      for (std::size_t k = 0; k < w.size(); ++k) {
        moved[static_cast<std::size_t>(perm[k])] = w[k];
      }
      out.data[static_cast<Eigen::Index>(out.flat(moved))] += t.data[static_cast<Eigen::Index>(f)];
    }
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.data /= count;
  return out;
}

/// sqrt(n+1) Sym(φ ⊗ T).
inline DenseTensor dense_create(const Vector& phi, const DenseTensor& t) {
  DenseTensor raw(t.d, t.n + 1);
  for (std::size_t f = 0; f < DenseTensor::size(t.d, t.n); ++f) {
    for (int i = 0; i < t.d; ++i) {
      const auto rest = t.word(f);
      std::vector<int> w{i};
      w.insert(w.end(), rest.begin(), rest.end());
      raw.data[static_cast<Eigen::Index>(raw.flat(w))] += phi[i] * t.data[static_cast<Eigen::Index>(f)];
    }
  }
  DenseTensor out = symmetrize(raw);
  out.data *= std::sqrt(t.n + 1.0);
  return out;
}

/// sqrt(n) contraction of the first slot with φ.
inline DenseTensor dense_annihilate(const Vector& phi, const DenseTensor& t) {
  DenseTensor out(t.d, t.n - 1);
  for (std::size_t f = 0; f < DenseTensor::size(t.d, t.n); ++f) {
    const auto w = t.word(f);
    const std::vector<int> rest(w.begin() + 1, w.end());
    out.data[static_cast<Eigen::Index>(out.flat(rest))] += phi[w[0]] * t.data[static_cast<Eigen::Index>(f)];
  }
  out.data *= std::sqrt(static_cast<double>(t.n));
  return out;
}

/// Σ_slots (I ⊗ .. ⊗ B ⊗ .. ⊗ I).
inline DenseTensor dense_slotwise(const Matrix& b, const DenseTensor& t) {
  DenseTensor out(t.d, t.n);
  for (std::size_t f = 0; f < DenseTensor::size(t.d, t.n); ++f) {
    const auto w = t.word(f);
    for (int slot = 0; slot < t.n; ++slot) {
      for (int i = 0; i < t.d; ++i) {
        auto v = w;
        v[static_cast<std::size_t>(slot)] = i;
        out.data[static_cast<Eigen::Index>(out.flat(v))] += b(i, w[static_cast<std::size_t>(slot)]) *
                                                           t.data[static_cast<Eigen::Index>(f)];
      }
    }
  }
  return out;
}

/// A ⊗ .. ⊗ A.
inline DenseTensor dense_power(const Matrix& a, const DenseTensor& t) {
  DenseTensor cur = t;
  for (int slot = 0; slot < t.n; ++slot) {
    DenseTensor next(t.d, t.n);
    for (std::size_t f = 0; f < DenseTensor::size(t.d, t.n); ++f) {
      const auto w = cur.word(f);
      for (int i = 0; i < t.d; ++i) {
        auto v = w;
        v[static_cast<std::size_t>(slot)] = i;
        next.data[static_cast<Eigen::Index>(next.flat(v))] += a(i, w[static_cast<std::size_t>(slot)]) *
                                                             cur.data[static_cast<Eigen::Index>(f)];
      }
    }
    cur = next;
  }
  return cur;
}

/// Matrix of a level map in the E_α bases via the dense oracle.
template <class Map>
Matrix dense_matrix(int d, int n_in, int n_out, Map map) {
  const auto in = fockbench::enumerate_basis(d, n_in);
  const auto out = fockbench::enumerate_basis(d, n_out);
  Matrix m(static_cast<Eigen::Index>(out.size()), static_cast<Eigen::Index>(in.size()));
  for (std::size_t c = 0; c < in.size(); ++c) {
    const DenseTensor image = map(embed_basis(in[c]));
    for (std::size_t r = 0; r < out.size(); ++r) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = project_basis(image, out[r]);
    }
  }
  return m;
}

/// E[ξ^n] for ξ = (N - w)/sqrt(w), N ~ Poisson(w), by direct pmf summation.
inline double poisson_pmf_moment(double w, int n) {
  double total = 0.0;
  double log_pmf = -w;
  for (int k = 0; k < 400; ++k) {
    if (k > 0) {
      log_pmf += std::log(w) - std::log(static_cast<double>(k));
    }
    total += std::exp(log_pmf) * std::pow((k - w) / std::sqrt(w), n);
  }
  return total;
}

/// E[X^n] for X ~ N(0, s²): (n-1)!! s^n for even n.
inline double gaussian_moment(double s, int n) {
  if (n % 2 == 1) {
    return 0.0;
  }
  double r = 1.0;
  for (int k = n - 1; k > 1; k -= 2) {
    r *= k;
  }
  return r * std::pow(s, n);
}

/// Moment of Σ_i c_i ξ_i with independent coordinates, from the per-coordinate
/// moment tables by repeated convolution of the binomial expansion.
inline double independent_sum_moment(const std::vector<std::vector<double>>& coord_moments, const Vector& c,
                                     int n) {
  // dist[k] = E[(partial sum)^k]
  std::vector<double> dist(static_cast<std::size_t>(n) + 1, 0.0);
  dist[0] = 1.0;
  for (int i = 0; i < c.size(); ++i) {
    std::vector<double> next(dist.size(), 0.0);
    for (int k = 0; k <= n; ++k) {
      for (int j = 0; j <= k; ++j) {
        next[static_cast<std::size_t>(k)] += static_cast<double>(fockbench::binomial(k, j)) *
                                             dist[static_cast<std::size_t>(k - j)] * std::pow(c[i], j) *
                                             coord_moments[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    dist = next;
  }
  return dist[static_cast<std::size_t>(n)];
}

}  // namespace testing_support
