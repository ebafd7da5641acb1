#include "fockbench/cli/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fockbench::cli {

struct Expression::Node {
  enum class Kind { number, variable, unary_minus, binary, call } kind = Kind::number;
  double value = 0.0;
  char op = 0;
  double (*fn)(double) = nullptr;
  std::vector<std::unique_ptr<Node>> children;

  double eval(double x) const {
    switch (kind) {
      case Kind::number:
        return value;
      case Kind::variable:
        return x;
      case Kind::unary_minus:
        return -children[0]->eval(x);
      case Kind::call:
        return fn(children[0]->eval(x));
      case Kind::binary: {
        const double a = children[0]->eval(x);
        const double b = children[1]->eval(x);
        switch (op) {
          case '+':
            return a + b;
          case '-':
            return a - b;
          case '*':
            return a * b;
          case '/':
            return a / b;
          default:
            return std::pow(a, b);
        }
      }
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

double fn_exp(double v) { return std::exp(v); }
double fn_log(double v) { return std::log(v); }
double fn_sqrt(double v) { return std::sqrt(v); }
double fn_abs(double v) { return std::abs(v); }
double fn_sin(double v) { return std::sin(v); }
double fn_cos(double v) { return std::cos(v); }
double fn_tanh(double v) { return std::tanh(v); }

const std::map<std::string, double (*)(double), std::less<>>& functions() {
  static const std::map<std::string, double (*)(double), std::less<>> table = {
      {"exp", fn_exp}, {"log", fn_log}, {"sqrt", fn_sqrt}, {"abs", fn_abs},
      {"sin", fn_sin}, {"cos", fn_cos}, {"tanh", fn_tanh}};
  return table;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    NodePtr root = sum();
    skip_space();
    if (pos_ != src_.size()) {
      fail("unexpected character");
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + std::string(src_) + "': " + what + " at offset " +
                                std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr lhs, NodePtr rhs) {
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::binary;
    node->op = op;
    node->children.push_back(std::move(lhs));
    node->children.push_back(std::move(rhs));
    return node;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = binary('+', std::move(lhs), product());
      } else if (accept('-')) {
        lhs = binary('-', std::move(lhs), product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary('*', std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = binary('/', std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto node = std::make_unique<Node>();
      node->kind = Node::Kind::unary_minus;
      node->children.push_back(unary());
      return node;
    }
    if (accept('+')) {
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) {
      return binary('^', std::move(base), unary());
    }
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= src_.size()) {
      fail("unexpected end of input");
    }
    if (accept('(')) {
      NodePtr inner = sum();
      if (!accept(')')) {
        fail("missing ')'");
      }
      return inner;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(src_.substr(pos_));
      char* end = nullptr;
      const double value = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) {
        fail("malformed number");
      }
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      auto node = std::make_unique<Node>();
      node->value = value;
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      }
      const std::string_view name = src_.substr(start, pos_ - start);
      auto node = std::make_unique<Node>();
      if (name == "x") {
        node->kind = Node::Kind::variable;
        return node;
      }
      if (name == "pi") {
        node->value = std::numbers::pi;
        return node;
      }
      if (name == "e") {
        node->value = std::numbers::e;
        return node;
      }
      const auto it = functions().find(name);
      if (it == functions().end()) {
        fail("unknown identifier '" + std::string(name) + "'");
      }
      if (!accept('(')) {
        fail("expected '(' after function name");
      }
      node->kind = Node::Kind::call;
      node->fn = it->second;
      node->children.push_back(sum());
      if (!accept(')')) {
        fail("missing ')'");
      }
      return node;
    }
    fail("unexpected character");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string_view source) : source_(source) {
  root_ = Parser(source_).parse();
}

Expression::~Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::operator()(double x) const { return root_->eval(x); }

}  // namespace fockbench::cli
