#include "fockbench/multi_index.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>

#include "fockbench/errors.hpp"

namespace fockbench {

int MultiIndex::degree() const {
  return std::accumulate(entries.begin(), entries.end(), 0);
}

MultiIndex MultiIndex::plus(int i) const {
  MultiIndex out = *this;
  ++out.entries[static_cast<std::size_t>(i)];
  return out;
}

MultiIndex MultiIndex::minus(int i) const {
  MultiIndex out = *this;
  --out.entries[static_cast<std::size_t>(i)];
  return out;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("multi-index dimension mismatch");
  }
  MultiIndex out = a;
  for (int i = 0; i < a.dim(); ++i) {
    out.entries[static_cast<std::size_t>(i)] += b[i];
  }
  return out;
}

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  }
  return result;
}

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

double multi_factorial(const MultiIndex& alpha) {
  double result = 1.0;
  for (int a : alpha.entries) {
    result *= factorial(a);
  }
  return result;
}

std::size_t level_dimension(int d, int n) {
  if (d < 1 || n < 0) {
    throw DimensionError("level_dimension requires d >= 1 and n >= 0");
  }
  return binomial(n + d - 1, d - 1);
}

std::size_t fock_dimension(int d, int cutoff) {
  // Σ_{m ≤ N} C(m+d-1, d-1) = C(N+d, d)
  return binomial(cutoff + d, d);
}

std::size_t level_offset(int d, int n) { return n == 0 ? 0 : fock_dimension(d, n - 1); }

namespace {

void enumerate_into(int pos, int remaining, std::vector<int>& current,
                    std::vector<MultiIndex>& out) {
  const int d = static_cast<int>(current.size());
  if (pos == d - 1) {
    current[static_cast<std::size_t>(pos)] = remaining;
    out.push_back(MultiIndex{current});
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    current[static_cast<std::size_t>(pos)] = v;
    enumerate_into(pos + 1, remaining - v, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_basis(int d, int n) {
  if (d < 1 || n < 0) {
    throw DimensionError("enumerate_basis requires d >= 1 and n >= 0");
  }
  std::vector<MultiIndex> out;
  out.reserve(level_dimension(d, n));
  std::vector<int> current(static_cast<std::size_t>(d), 0);
  enumerate_into(0, n, current, out);
  return out;
}

LevelBasis::LevelBasis(int d, int n) : d_(d), n_(n), indices_(enumerate_basis(d, n)) {}

std::size_t LevelBasis::index_of(const MultiIndex& alpha) const {
  if (alpha.dim() != d_ || alpha.degree() != n_) {
    throw DimensionError("multi-index does not belong to this level");
  }
  // Count the indices that precede alpha: at each position, every larger
  // entry value with the same prefix contributes a full block of completions.
  std::size_t rank = 0;
  int remaining = n_;
  for (int i = 0; i + 1 < d_; ++i) {
    const int tail = d_ - i - 1;
    for (int v = remaining; v > alpha[i]; --v) {
      rank += level_dimension(tail, remaining - v);
    }
    remaining -= alpha[i];
  }
  return rank;
}

const LevelBasis& level_basis(int d, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<LevelBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{d, n}];
  if (!slot) {
    slot = std::make_unique<LevelBasis>(d, n);
  }
  return *slot;
}

}  // namespace fockbench
