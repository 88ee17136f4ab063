#include "kauction/quantile_expr.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kauction {

struct QuantileExpr::Node {
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Exp, Ln, Neg };
  Kind kind;
  double constant = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = QuantileExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Const;
  n->constant = v;
  return n;
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (consume('+'))
        lhs = make(Node::Kind::Add, lhs, term());
      else if (consume('-'))
        lhs = make(Node::Kind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip_ws();
      if (consume('*'))
        lhs = make(Node::Kind::Mul, lhs, factor());
      else if (consume('/'))
        lhs = make(Node::Kind::Div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    skip_ws();
    if (consume('-')) return make(Node::Kind::Neg, factor());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    skip_ws();
    if (consume('^')) return make(Node::Kind::Pow, base, factor());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (consume('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (match_word("exp")) {
      expect('(');
      NodePtr e = expr();
      expect(')');
      return make(Node::Kind::Exp, e);
    }
    if (match_word("ln")) {
      expect('(');
      NodePtr e = expr();
      expect(')');
      return make(Node::Kind::Ln, e);
    }
    if (match_word("u")) return make(Node::Kind::Var);
    fail("expected a number, 'u', 'exp', 'ln' or '('");
    return nullptr;
  }

  NodePtr number() {
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
      ++end;
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t mark = end + 1;
      if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-')) ++mark;
      if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
        end = mark;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end])))
          ++end;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end) fail("malformed number");
    pos_ = end;
    return make_const(value);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  bool match_word(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    std::size_t after = pos_ + word.size();
    if (after < text_.size() &&
        (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_'))
      return false;
    pos_ = after;
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("quantile expression: " + what + " at position " +
                                std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Jet eval_node(const Node& node, const Jet& u) {
  switch (node.kind) {
    case Node::Kind::Const:
      return Jet::constant(node.constant, u.anchor(), u.order());
    case Node::Kind::Var:
      return u;
    case Node::Kind::Add:
      return eval_node(*node.lhs, u) + eval_node(*node.rhs, u);
    case Node::Kind::Sub:
      return eval_node(*node.lhs, u) - eval_node(*node.rhs, u);
    case Node::Kind::Mul:
      return eval_node(*node.lhs, u) * eval_node(*node.rhs, u);
    case Node::Kind::Div:
      return eval_node(*node.lhs, u) / eval_node(*node.rhs, u);
    case Node::Kind::Neg:
      return -eval_node(*node.lhs, u);
    case Node::Kind::Exp:
      return exp(eval_node(*node.lhs, u));
    case Node::Kind::Ln:
      return ln(eval_node(*node.lhs, u));
    case Node::Kind::Pow: {
      Jet base = eval_node(*node.lhs, u);
      if (node.rhs->kind == Node::Kind::Const) return pow(base, node.rhs->constant);
      Jet expo = eval_node(*node.rhs, u);
      bool constant_expo = true;
      for (std::size_t i = 1; i <= expo.order(); ++i)
        if (expo.coeff(i) != 0.0) constant_expo = false;
      if (constant_expo) return pow(base, expo.value());
      return exp(expo * ln(base));
    }
  }
  throw std::logic_error("unreachable expression node");
}

}  // namespace

QuantileExpr QuantileExpr::parse(std::string_view text) {
  Parser parser(text);
  return QuantileExpr(parser.run(), std::string(text));
}

Jet QuantileExpr::eval(const Jet& u) const { return eval_node(*root_, u); }

double QuantileExpr::eval(double u) const { return eval(Jet::variable(u, 0)).value(); }

void validate_quantile_program(const QuantileExpr& expr) {
  constexpr int kPoints = 101;
  constexpr double kLo = 0.005, kHi = 0.995;
  double prev = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    double u = kLo + (kHi - kLo) * static_cast<double>(i) / (kPoints - 1);
    double q = expr.eval(u);
    if (!std::isfinite(q))
      throw std::invalid_argument("quantile program is not finite at u=" + std::to_string(u));
    if (i == 0 && q < 0.0)
      throw std::invalid_argument("quantile program is negative at u=" + std::to_string(u) +
                                  "; valuations must be nonnegative");
    if (i > 0 && !(q > prev))
      throw std::invalid_argument("quantile program is not strictly increasing at u=" +
                                  std::to_string(u));
    prev = q;
  }
}

}  // namespace kauction
