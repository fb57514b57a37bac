#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pblab/errors.hpp"
#include "pblab/field.hpp"
#include "pblab/textio.hpp"

namespace pblab {

// Arithmetic expressions over x, y with the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?          // '^' right-associative
//   unary  := '-' unary | atom
//   atom   := number | 'x' | 'y' | 'pi' | name '(' args ')' | '(' expr ')'
// Functions: sin, cos, exp, sqrt, abs (one argument) and bump(cx, cy, r),
// the C-infinity bump  e^{1 - 1/(1-s)}  for  s = ((x-cx)^2+(y-cy)^2)/r^2 < 1.

class Expression {
public:
  enum class Kind { number, var_x, var_y, pi, neg, add, sub, mul, div, pow, call };

  struct Node {
    Kind kind;
    double number = 0;
    std::string name;  // call only
    std::vector<std::unique_ptr<Node>> args;
  };

  explicit Expression(std::unique_ptr<Node> root) : root_(std::move(root)) {}

  double eval(double x, double y) const { return eval_node(*root_, x, y); }

  std::string pretty_print() const { return print_node(*root_); }

  bool same_tree(const Expression& other) const {
    return equal_nodes(*root_, *other.root_);
  }

  const Node& root() const { return *root_; }

private:
  static double eval_node(const Node& n, double x, double y) {
    switch (n.kind) {
      case Kind::number: return n.number;
      case Kind::var_x: return x;
      case Kind::var_y: return y;
      case Kind::pi: return M_PI;
      case Kind::neg: return -eval_node(*n.args[0], x, y);
      case Kind::add: return eval_node(*n.args[0], x, y) + eval_node(*n.args[1], x, y);
      case Kind::sub: return eval_node(*n.args[0], x, y) - eval_node(*n.args[1], x, y);
      case Kind::mul: return eval_node(*n.args[0], x, y) * eval_node(*n.args[1], x, y);
      case Kind::div: {
        const double den = eval_node(*n.args[1], x, y);
        if (den == 0.0) throw eval_error("division by zero", x, y);
        return eval_node(*n.args[0], x, y) / den;
      }
      case Kind::pow:
        return std::pow(eval_node(*n.args[0], x, y), eval_node(*n.args[1], x, y));
      case Kind::call: {
        if (n.name == "bump") {
          const double cx = eval_node(*n.args[0], x, y);
          const double cy = eval_node(*n.args[1], x, y);
          const double r = eval_node(*n.args[2], x, y);
          const double s = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (r * r);
          return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
        }
        const double a = eval_node(*n.args[0], x, y);
        if (n.name == "sin") return std::sin(a);
        if (n.name == "cos") return std::cos(a);
        if (n.name == "exp") return std::exp(a);
        if (n.name == "sqrt") return std::sqrt(a);
        return std::abs(a);  // "abs"
      }
    }
    return 0;  // unreachable
  }

  static std::string print_node(const Node& n) {
    switch (n.kind) {
      case Kind::number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.number);
        return buf;
      }
      case Kind::var_x: return "x";
      case Kind::var_y: return "y";
      case Kind::pi: return "pi";
      case Kind::neg: return "(-" + print_node(*n.args[0]) + ")";
      case Kind::add: return "(" + print_node(*n.args[0]) + "+" + print_node(*n.args[1]) + ")";
      case Kind::sub: return "(" + print_node(*n.args[0]) + "-" + print_node(*n.args[1]) + ")";
      case Kind::mul: return "(" + print_node(*n.args[0]) + "*" + print_node(*n.args[1]) + ")";
      case Kind::div: return "(" + print_node(*n.args[0]) + "/" + print_node(*n.args[1]) + ")";
      case Kind::pow: return "(" + print_node(*n.args[0]) + "^" + print_node(*n.args[1]) + ")";
      case Kind::call: {
        std::string s = n.name + "(";
        for (std::size_t k = 0; k < n.args.size(); ++k) {
          if (k) s += ",";
          s += print_node(*n.args[k]);
        }
        return s + ")";
      }
    }
    return {};
  }

  static bool equal_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size())
      return false;
    if (a.kind == Kind::number && a.number != b.number) return false;
    for (std::size_t k = 0; k < a.args.size(); ++k)
      if (!equal_nodes(*a.args[k], *b.args[k])) return false;
    return true;
  }

  std::unique_ptr<Node> root_;
};

namespace detail {

class ExprParser {
public:
  explicit ExprParser(const std::string& text) : text_(text) {}

  std::unique_ptr<Expression::Node> parse() {
    auto e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw parse_error("unexpected trailing input", pos_);
    return e;
  }

private:
  using Node = Expression::Node;
  using Kind = Expression::Kind;

  static std::unique_ptr<Node> make(Kind k) {
    auto n = std::make_unique<Node>();
    n->kind = k;
    return n;
  }
  static std::unique_ptr<Node> binary(Kind k, std::unique_ptr<Node> a,
                                      std::unique_ptr<Node> b) {
    auto n = make(k);
    n->args.push_back(std::move(a));
    n->args.push_back(std::move(b));
    return n;
  }

  std::unique_ptr<Node> parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        lhs = binary(Kind::add, std::move(lhs), parse_term());
      else if (accept('-'))
        lhs = binary(Kind::sub, std::move(lhs), parse_term());
      else
        return lhs;
    }
  }

  std::unique_ptr<Node> parse_term() {
    auto lhs = parse_factor();
    for (;;) {
      skip_ws();
      if (accept('*'))
        lhs = binary(Kind::mul, std::move(lhs), parse_factor());
      else if (accept('/'))
        lhs = binary(Kind::div, std::move(lhs), parse_factor());
      else
        return lhs;
    }
  }

  std::unique_ptr<Node> parse_factor() {
    auto base = parse_unary();
    skip_ws();
    if (accept('^')) return binary(Kind::pow, std::move(base), parse_factor());
    return base;
  }

  std::unique_ptr<Node> parse_unary() {
    skip_ws();
    if (accept('-')) {
      auto n = make(Kind::neg);
      n->args.push_back(parse_unary());
      return n;
    }
    return parse_atom();
  }

  std::unique_ptr<Node> parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw parse_error("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
    if (accept('(')) {
      auto e = parse_expr();
      expect(')');
      return e;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", pos_);
  }

  std::unique_ptr<Node> parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // "e" belongs to something else; not a valid exponent
      }
    }
    const std::string tok = text_.substr(start, pos_ - start);
    if (tok == ".") throw parse_error("malformed number", start);
    auto n = make(Kind::number);
    n->number = std::stod(tok);
    return n;
  }

  std::unique_ptr<Node> parse_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_]))))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return make(Kind::var_x);
    if (name == "y") return make(Kind::var_y);
    if (name == "pi") return make(Kind::pi);

    std::size_t arity;
    if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt" || name == "abs")
      arity = 1;
    else if (name == "bump")
      arity = 3;
    else
      throw parse_error("unknown function '" + name + "'", start);

    skip_ws();
    expect('(');
    auto n = make(Kind::call);
    n->name = name;
    for (;;) {
      n->args.push_back(parse_expr());
      skip_ws();
      if (accept(',')) continue;
      expect(')');
      break;
    }
    if (n->args.size() != arity)
      throw parse_error("function '" + name + "' expects " + std::to_string(arity) +
                            " argument(s), got " + std::to_string(n->args.size()),
                        start);
    return n;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!accept(c))
      throw parse_error(std::string("expected '") + c + "'", pos_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expression parse_expression(const std::string& text) {
  return Expression(detail::ExprParser(text).parse());
}

struct SampledField {
  ScalarField field;
  bool truncated_nonzero = false;  // margin zeroing clipped a nonzero sample
};

/// Evaluates the expression at every node and applies the support margin.
/// A node evaluating to a non-finite value aborts with its coordinates.
inline SampledField sample_expression(const Expression& e, const Grid2D& grid, int margin) {
  if (margin < 0) throw std::invalid_argument("margin must be >= 0");
  std::vector<double> v(static_cast<std::size_t>(grid.node_count()));
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i), y = grid.y(j);
      const double val = e.eval(x, y);
      if (!std::isfinite(val))
        throw eval_error("expression evaluates to a non-finite value at (" + fmt_g17(x) +
                             ", " + fmt_g17(y) + ")",
                         x, y);
      v[static_cast<std::size_t>(j) * grid.nx + i] = val;
    }
  SampledField out{ScalarField(grid, std::move(v), 0), false};
  if (grid.topology == Topology::plane && margin > 0)
    out.truncated_nonzero = out.field.apply_margin(margin);
  return out;
}

}  // namespace pblab
