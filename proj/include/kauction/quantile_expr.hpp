#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "kauction/jet.hpp"

namespace kauction {

// A quantile function supplied as an expression in the variable u, built
// from numbers, + - * / ^, exp(...) and ln(...). Parsed once, then
// evaluable either as a plain double or in jet arithmetic (which is how
// user-supplied distributions get their derivatives).
//
// Grammar (infix, ^ binds tightest and is right-associative):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | 'u' | 'exp' '(' expr ')' | 'ln' '(' expr ')' | '(' expr ')'
class QuantileExpr {
public:
  static QuantileExpr parse(std::string_view text);

  Jet eval(const Jet& u) const;
  double eval(double u) const;

  const std::string& text() const { return text_; }

  struct Node;

private:
  QuantileExpr(std::shared_ptr<const Node> root, std::string text)
      : root_(std::move(root)), text_(std::move(text)) {}

  std::shared_ptr<const Node> root_;
  std::string text_;
};

// Checks that the expression behaves like a quantile function on the
// default validation grid: finite, nonnegative at the low end and strictly
// increasing. Throws std::invalid_argument naming the violation.
void validate_quantile_program(const QuantileExpr& expr);

}  // namespace kauction
