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

#ifndef ESCLAB_EXPRESSION_HPP
#define ESCLAB_EXPRESSION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esclab/error.hpp"

namespace esclab {

/// Compiled arithmetic expression over theta1..thetaN.
///
///   expr    = term { ("+" | "-") term }
///   term    = unary { ("*" | "/") unary }
///   unary   = ("+" | "-") unary | power
///   power   = primary [ "^" unary ]
///   primary = number | "theta" digits | "(" expr ")"
///
/// `^` binds tighter than unary minus and associates to the right, so
/// -theta1^2 is -(theta1^2) and 2^3^2 is 2^9.
class Expression {
 public:
  static Expression parse(std::string_view text, std::size_t n);

  double evaluate(std::span<const double> theta) const;
  std::size_t dim() const noexcept { return n_; }
  const std::string& text() const noexcept { return text_; }

 private:
  enum class Op : std::uint8_t { constant, variable, negate, add, sub, mul, div, pow };
  struct Node {
    Op op;
    std::int32_t lhs = -1;
    std::int32_t rhs = -1;
    double value = 0.0;       // constant
    std::size_t index = 0;    // variable
  };

  double eval_node(std::int32_t id, std::span<const double> theta) const;

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  std::size_t n_ = 0;
  std::string text_;

  friend class ExpressionParser;
};

}  // namespace esclab

#endif  // ESCLAB_EXPRESSION_HPP
