// Copyright 2026 The esc-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "esclab/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace esclab {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::size_t n, Expression& out)
      : text_(text), n_(n), out_(out) {}

  std::int32_t parse() {
    const auto root = expr();
    skip_space();
    if (pos_ < text_.size()) fail(ParseErrc::syntax, "unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(ParseErrc code, const std::string& message) const {
    throw ParseError(code, pos_ + 1, message);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::int32_t push(Expression::Node node) {
    out_.nodes_.push_back(node);
    return static_cast<std::int32_t>(out_.nodes_.size() - 1);
  }

  std::int32_t binary(Op op, std::int32_t lhs, std::int32_t rhs) {
    return push({.op = op, .lhs = lhs, .rhs = rhs});
  }

  std::int32_t expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Op::add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(Op::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  std::int32_t term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Op::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = binary(Op::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  std::int32_t unary() {
    if (accept('-')) return push({.op = Op::negate, .lhs = unary()});
    if (accept('+')) return unary();
    return power();
  }

  std::int32_t power() {
    const auto base = primary();
    if (accept('^')) return binary(Op::pow, base, unary());
    return base;
  }

  std::int32_t primary() {
    skip_space();
    if (pos_ >= text_.size()) fail(ParseErrc::syntax, "unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const auto inner = expr();
      if (!accept(')')) fail(ParseErrc::syntax, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(ParseErrc::syntax, "unexpected '" + std::string(1, c) + "'");
  }

  std::int32_t number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail(ParseErrc::syntax, "malformed number");
    }
    return push({.op = Op::constant, .value = value});
  }

  std::int32_t identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    constexpr std::string_view prefix = "theta";
    const bool indexed = name.size() > prefix.size() && name.starts_with(prefix) &&
                         name.substr(prefix.size()).find_first_not_of("0123456789") ==
                             std::string_view::npos;
    if (!indexed) {
      pos_ = start;
      fail(ParseErrc::unknown_identifier, "unknown identifier '" + std::string(name) + "'");
    }
    std::size_t index = 0;
    const auto digits = name.substr(prefix.size());
    std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (index < 1 || index > n_) {
      pos_ = start;
      fail(ParseErrc::wrong_arity, "variable '" + std::string(name) + "' outside theta1..theta" +
                                       std::to_string(n_));
    }
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      fail(ParseErrc::syntax, "'" + std::string(name) + "' is not a function");
    }
    return push({.op = Op::variable, .index = index - 1});
  }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
  Expression& out_;
};

Expression Expression::parse(std::string_view text, std::size_t n) {
  if (n == 0) throw InvalidArgument("expression dimension must be at least 1");
  Expression e;
  e.n_ = n;
  e.text_ = std::string(text);
  ExpressionParser parser(text, n, e);
  e.root_ = parser.parse();
  return e;
}

double Expression::evaluate(std::span<const double> theta) const {
  if (theta.size() != n_) throw DimensionError("expression argument", n_, theta.size());
  return eval_node(root_, theta);
}

double Expression::eval_node(std::int32_t id, std::span<const double> theta) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  switch (node.op) {
    case Op::constant:
      return node.value;
    case Op::variable:
      return theta[node.index];
    case Op::negate:
      return -eval_node(node.lhs, theta);
    case Op::add:
      return eval_node(node.lhs, theta) + eval_node(node.rhs, theta);
    case Op::sub:
      return eval_node(node.lhs, theta) - eval_node(node.rhs, theta);
    case Op::mul:
      return eval_node(node.lhs, theta) * eval_node(node.rhs, theta);
    case Op::div:
      return eval_node(node.lhs, theta) / eval_node(node.rhs, theta);
    case Op::pow: {
      const double base = eval_node(node.lhs, theta);
      const Node& exponent = nodes_[static_cast<std::size_t>(node.rhs)];
      // small integer powers by multiplication; keeps polynomial costs exact-ish
      if (exponent.op == Op::constant && exponent.value == std::floor(exponent.value) &&
          std::abs(exponent.value) <= 16.0) {
        const int e = static_cast<int>(exponent.value);
        double r = 1.0;
        for (int k = 0; k < std::abs(e); ++k) r *= base;
        return e < 0 ? 1.0 / r : r;
      }
      return std::pow(base, eval_node(node.rhs, theta));
    }
  }
  return 0.0;
}

}  // namespace esclab
