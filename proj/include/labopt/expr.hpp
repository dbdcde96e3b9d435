#pragma once

// Small arithmetic expression language used by config-defined problems.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          (right associative)
//   primary := number | 'x'<k> | name '(' args ')' | 'pi' | '(' expr ')'
//
// Variables are 1-based in the text (x1..xN) and 0-based internally.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "labopt/error.hpp"

namespace labopt {

enum class Func { Sin, Cos, Sqrt, Abs, Exp, Min, Max };

class Expr {
 public:
  enum class Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

  struct Node {
    Kind kind = Kind::Const;
    double value = 0.0;      // Const
    int var = 0;             // Var
    Func func = Func::Sin;   // Call
    std::vector<int> args;   // operands (1 for Neg, 2 for binary, n for Call)
  };

  Expr() = default;

  static Expr constant(double v) {
    Expr e;
    e.root_ = e.push({Kind::Const, v, 0, Func::Sin, {}});
    return e;
  }

  static Expr variable(int index) {
    Expr e;
    e.root_ = e.push({Kind::Var, 0.0, index, Func::Sin, {}});
    return e;
  }

  static Expr binary(Kind k, const Expr& lhs, const Expr& rhs) {
    Expr e;
    int a = e.graft(lhs, lhs.root_);
    int b = e.graft(rhs, rhs.root_);
    e.root_ = e.push({k, 0.0, 0, Func::Sin, {a, b}});
    return e;
  }

  static Expr negate(const Expr& operand) {
    Expr e;
    int a = e.graft(operand, operand.root_);
    e.root_ = e.push({Kind::Neg, 0.0, 0, Func::Sin, {a}});
    return e;
  }

  bool empty() const noexcept { return nodes_.empty(); }

  /// Number of variables needed to evaluate: 1 + highest index referenced.
  int arity() const noexcept {
    int n = 0;
    for (const auto& node : nodes_)
      if (node.kind == Kind::Var) n = std::max(n, node.var + 1);
    return n;
  }

  const Node& root() const { return nodes_.at(static_cast<std::size_t>(root_)); }
  const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }

  double eval(std::span<const double> x) const {
    if (nodes_.empty()) throw EvalError("empty expression");
    if (static_cast<int>(x.size()) < arity())
      throw DimensionError("expression references x" + std::to_string(arity()) +
                           " but point has " + std::to_string(x.size()) + " coordinates");
    return eval_node(root_, x);
  }

  /// Fully parenthesised rendering that parses back to the same tree.
  std::string to_string() const {
    if (nodes_.empty()) return {};
    std::string out;
    print_node(root_, out);
    return out;
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return same(a, a.root_, b, b.root_);
  }

 private:
  friend class ExprParser;

  int push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int graft(const Expr& src, int at) {
    Node copy = src.nodes_[static_cast<std::size_t>(at)];
    for (auto& child : copy.args) child = graft(src, child);
    return push(std::move(copy));
  }

  static bool same(const Expr& a, int i, const Expr& b, int j) {
    const Node& x = a.nodes_[static_cast<std::size_t>(i)];
    const Node& y = b.nodes_[static_cast<std::size_t>(j)];
    if (x.kind != y.kind || x.args.size() != y.args.size()) return false;
    switch (x.kind) {
      case Kind::Const:
        if (x.value != y.value) return false;
        break;
      case Kind::Var:
        if (x.var != y.var) return false;
        break;
      case Kind::Call:
        if (x.func != y.func) return false;
        break;
      default:
        break;
    }
    for (std::size_t k = 0; k < x.args.size(); ++k)
      if (!same(a, x.args[k], b, y.args[k])) return false;
    return true;
  }

  static double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
    return v;
  }

  double eval_node(int i, std::span<const double> x) const {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    auto arg = [&](std::size_t k) { return eval_node(n.args[k], x); };
    switch (n.kind) {
      case Kind::Const:
        return n.value;
      case Kind::Var:
        return x[static_cast<std::size_t>(n.var)];
      case Kind::Neg:
        return -arg(0);
      case Kind::Add:
        return checked(arg(0) + arg(1), "addition");
      case Kind::Sub:
        return checked(arg(0) - arg(1), "subtraction");
      case Kind::Mul:
        return checked(arg(0) * arg(1), "multiplication");
      case Kind::Div: {
        double num = arg(0);
        double den = arg(1);
        if (den == 0.0) throw EvalError("division by zero");
        return checked(num / den, "division");
      }
      case Kind::Pow: {
        double base = arg(0);
        double ex = arg(1);
        double r = std::pow(base, ex);
        if (std::isnan(r)) throw EvalError("domain error in ^ (negative base, fractional exponent)");
        if (base == 0.0 && ex < 0.0) throw EvalError("division by zero in ^");
        return checked(r, "^");
      }
      case Kind::Call:
        return call(n, x);
    }
    throw EvalError("corrupt expression node");
  }

  double call(const Node& n, std::span<const double> x) const {
    auto arg = [&](std::size_t k) { return eval_node(n.args[k], x); };
    switch (n.func) {
      case Func::Sin:
        return std::sin(arg(0));
      case Func::Cos:
        return std::cos(arg(0));
      case Func::Sqrt: {
        double v = arg(0);
        if (v < 0.0) throw EvalError("domain error: sqrt of negative value");
        return std::sqrt(v);
      }
      case Func::Abs:
        return std::fabs(arg(0));
      case Func::Exp:
        return checked(std::exp(arg(0)), "exp");
      case Func::Min:
      case Func::Max: {
        double best = arg(0);
        for (std::size_t k = 1; k < n.args.size(); ++k) {
          double v = arg(k);
          best = n.func == Func::Min ? std::min(best, v) : std::max(best, v);
        }
        return best;
      }
    }
    throw EvalError("unknown function");
  }

  static const char* func_name(Func f) {
    switch (f) {
      case Func::Sin: return "sin";
      case Func::Cos: return "cos";
      case Func::Sqrt: return "sqrt";
      case Func::Abs: return "abs";
      case Func::Exp: return "exp";
      case Func::Min: return "min";
      case Func::Max: return "max";
    }
    return "?";
  }

  void print_node(int i, std::string& out) const {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.kind) {
      case Kind::Const: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
        out += buf;
        return;
      }
      case Kind::Var:
        out += "x" + std::to_string(n.var + 1);
        return;
      case Kind::Neg:
        out += "(-";
        print_node(n.args[0], out);
        out += ")";
        return;
      case Kind::Call:
        out += func_name(n.func);
        out += "(";
        for (std::size_t k = 0; k < n.args.size(); ++k) {
          if (k) out += ", ";
          print_node(n.args[k], out);
        }
        out += ")";
        return;
      default:
        break;
    }
    static constexpr std::string_view ops = "+-*/^";
    char op = ops[static_cast<std::size_t>(n.kind) - static_cast<std::size_t>(Kind::Add)];
    out += "(";
    print_node(n.args[0], out);
    out += ' ';
    out += op;
    out += ' ';
    print_node(n.args[1], out);
    out += ")";
  }

  std::vector<Node> nodes_;
  int root_ = -1;
};

class ExprParser {
 public:
  ExprParser(std::string_view text, int n_vars, std::size_t base_offset = 0)
      : text_(text), n_vars_(n_vars), base_(base_offset) {}

  Expr parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("empty expression");
    out_.root_ = parse_sum();
    skip_ws();
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return std::move(out_);
  }

 private:
  using Kind = Expr::Kind;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, base_ + pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, base_ + at);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int node(Kind k, std::vector<int> args) { return out_.push({k, 0.0, 0, Func::Sin, std::move(args)}); }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = node(Kind::Add, {lhs, parse_product()});
      else if (accept('-'))
        lhs = node(Kind::Sub, {lhs, parse_product()});
      else
        return lhs;
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = node(Kind::Mul, {lhs, parse_unary()});
      else if (accept('/'))
        lhs = node(Kind::Div, {lhs, parse_unary()});
      else
        return lhs;
    }
  }

  int parse_unary() {
    if (accept('-')) return node(Kind::Neg, {parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    if (accept('^')) return node(Kind::Pow, {base, parse_unary()});
    return base;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  int parse_number() {
    std::size_t start = pos_;
    std::string buf(text_.substr(pos_));
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    std::size_t used = static_cast<std::size_t>(end - buf.c_str());
    if (used == 0) fail("malformed number");
    if (!std::isfinite(v)) fail_at("numeric literal out of range", start);
    pos_ += used;
    return out_.push({Kind::Const, v, 0, Func::Sin, {}});
  }

  int parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));

    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      long idx = std::strtol(name.c_str() + 1, nullptr, 10);
      if (idx < 1 || idx > n_vars_)
        fail_at("variable " + name + " out of range (problem has " + std::to_string(n_vars_) +
                    " variables)",
                start);
      return out_.push({Kind::Var, 0.0, static_cast<int>(idx - 1), Func::Sin, {}});
    }
    if (name == "pi") {
      if (accept('(')) {
        if (!accept(')')) fail("pi takes no arguments");
      }
      return out_.push({Kind::Const, std::numbers::pi, 0, Func::Sin, {}});
    }

    Func f;
    std::size_t min_args = 1, max_args = 1;
    if (name == "sin") f = Func::Sin;
    else if (name == "cos") f = Func::Cos;
    else if (name == "sqrt") f = Func::Sqrt;
    else if (name == "abs") f = Func::Abs;
    else if (name == "exp") f = Func::Exp;
    else if (name == "min" || name == "max") {
      f = name == "min" ? Func::Min : Func::Max;
      min_args = 1;
      max_args = static_cast<std::size_t>(-1);
    } else {
      fail_at("unknown identifier '" + name + "'", start);
    }

    if (!accept('(')) fail("expected '(' after " + name);
    std::vector<int> args;
    if (!accept(')')) {
      do {
        args.push_back(parse_sum());
      } while (accept(','));
      if (!accept(')')) fail("expected ')' to close call to " + name);
    }
    if (args.size() < min_args || args.size() > max_args)
      fail_at("wrong number of arguments to " + name, start);
    return out_.push({Kind::Call, 0.0, 0, f, std::move(args)});
  }

  std::string_view text_;
  int n_vars_;
  std::size_t base_;
  std::size_t pos_ = 0;
  Expr out_;
};

inline Expr parse_expression(std::string_view text, int n_vars) {
  return ExprParser(text, n_vars).parse();
}

/// Parses "lhs <= rhs", "lhs >= rhs" or a bare "g" and returns g with the
/// convention g(x) <= 0 meaning satisfied.
inline Expr parse_constraint(std::string_view text, int n_vars) {
  std::size_t depth = 0;
  std::size_t op_at = std::string_view::npos;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    else if (c == ')' && depth > 0) --depth;
    else if (depth == 0 && (c == '<' || c == '>') && text[i + 1] == '=') {
      if (op_at != std::string_view::npos) throw ParseError("more than one comparison", i);
      op_at = i;
    }
  }
  for (std::size_t i = 0; i < text.size(); ++i) {
    bool strict = (text[i] == '<' || text[i] == '>') && (i + 1 >= text.size() || text[i + 1] != '=');
    if (strict) throw ParseError("strict comparison not supported; use <= or >=", i);
    if (text[i] == '=' && (i == 0 || (text[i - 1] != '<' && text[i - 1] != '>')))
      throw ParseError("equality constraints are not supported", i);
  }
  if (op_at == std::string_view::npos) return parse_expression(text, n_vars);

  bool less = text[op_at] == '<';
  Expr lhs = ExprParser(text.substr(0, op_at), n_vars, 0).parse();
  Expr rhs = ExprParser(text.substr(op_at + 2), n_vars, op_at + 2).parse();
  bool rhs_zero = rhs.root().kind == Expr::Kind::Const && rhs.root().value == 0.0;
  bool lhs_zero = lhs.root().kind == Expr::Kind::Const && lhs.root().value == 0.0;
  if (less) {
    if (rhs_zero) return lhs;
    if (lhs_zero) return Expr::negate(rhs);
    return Expr::binary(Expr::Kind::Sub, lhs, rhs);
  }
  if (rhs_zero) return Expr::negate(lhs);
  if (lhs_zero) return rhs;
  return Expr::binary(Expr::Kind::Sub, rhs, lhs);
}

}  // namespace labopt
