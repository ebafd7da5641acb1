#pragma once

#include <stdexcept>
#include <string>

namespace fockbench {

/// Operand dimensions or degrees do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested computation would touch levels above the Fock cutoff.
class TruncationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A matrix that must be invertible (K, V_{n,n}, a Gram matrix) is not,
/// numerically.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fockbench
