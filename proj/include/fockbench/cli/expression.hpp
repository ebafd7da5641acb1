#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace fockbench::cli {

/// Scalar expression in one variable `x`, e.g. "exp(-x^2)" or "1/(1+x^2)".
///
/// Grammar: + - * / ^ (right-associative), unary minus, parentheses, numeric
/// literals, the constants pi and e, and the functions exp, log, sqrt, abs,
/// sin, cos, tanh. Parse errors throw std::invalid_argument with the offset.
class Expression {
 public:
  explicit Expression(std::string_view source);
  ~Expression();
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  double operator()(double x) const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::unique_ptr<Node> root_;
};

}  // namespace fockbench::cli
