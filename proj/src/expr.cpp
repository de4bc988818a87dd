#include "charpit/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace charpit {

namespace {

bool is_number(const ExprPtr& e) { return e->kind == Expr::Kind::Number; }
bool is_number(const ExprPtr& e, double v) {
  return e->kind == Expr::Kind::Number && e->number == v;
}

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

ExprPtr make_number(double v) {
  Expr e{};
  e.kind = Expr::Kind::Number;
  e.number = v;
  return node(std::move(e));
}

ExprPtr make_var(int index) {
  Expr e{};
  e.kind = Expr::Kind::Var;
  e.var = index;
  return node(std::move(e));
}

ExprPtr make_neg(ExprPtr a) {
  if (is_number(a)) return make_number(-a->number);
  if (a->kind == Expr::Kind::Neg) return a->a;
  Expr e{};
  e.kind = Expr::Kind::Neg;
  e.a = std::move(a);
  return node(std::move(e));
}

ExprPtr make_add(ExprPtr a, ExprPtr b) {
  if (is_number(a) && is_number(b)) {
    double v = a->number + b->number;
    if (std::isfinite(v)) return make_number(v);
  }
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  Expr e{};
  e.kind = Expr::Kind::Add;
  e.a = std::move(a);
  e.b = std::move(b);
  return node(std::move(e));
}

ExprPtr make_sub(ExprPtr a, ExprPtr b) {
  if (is_number(a) && is_number(b)) {
    double v = a->number - b->number;
    if (std::isfinite(v)) return make_number(v);
  }
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return make_neg(std::move(b));
  Expr e{};
  e.kind = Expr::Kind::Sub;
  e.a = std::move(a);
  e.b = std::move(b);
  return node(std::move(e));
}

ExprPtr make_mul(ExprPtr a, ExprPtr b) {
  if (is_number(a) && is_number(b)) {
    double v = a->number * b->number;
    if (std::isfinite(v)) return make_number(v);
  }
  if (is_number(a, 0.0) || is_number(b, 0.0)) return make_number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  Expr e{};
  e.kind = Expr::Kind::Mul;
  e.a = std::move(a);
  e.b = std::move(b);
  return node(std::move(e));
}

ExprPtr make_div(ExprPtr a, ExprPtr b) {
  if (is_number(a) && is_number(b) && b->number != 0.0) {
    double v = a->number / b->number;
    if (std::isfinite(v)) return make_number(v);
  }
  if (is_number(b, 1.0)) return a;
  Expr e{};
  e.kind = Expr::Kind::Div;
  e.a = std::move(a);
  e.b = std::move(b);
  return node(std::move(e));
}

ExprPtr make_pow(ExprPtr a, int exponent) {
  if (exponent < 0) throw Error("make_pow: negative exponent");
  if (exponent == 0) return make_number(1.0);
  if (exponent == 1) return a;
  if (is_number(a)) {
    double v = 1.0;
    for (int i = 0; i < exponent; ++i) v *= a->number;
    if (std::isfinite(v)) return make_number(v);
  }
  Expr e{};
  e.kind = Expr::Kind::Pow;
  e.exponent = exponent;
  e.a = std::move(a);
  return node(std::move(e));
}

ExprPtr make_fn(FnKind fn, ExprPtr a) {
  if (is_number(a)) {
    double x = a->number;
    bool ok = true;
    double v = 0.0;
    switch (fn) {
      case FnKind::Sin: v = std::sin(x); break;
      case FnKind::Cos: v = std::cos(x); break;
      case FnKind::Exp: v = std::exp(x); break;
      case FnKind::Sqrt: ok = x >= 0.0; v = ok ? std::sqrt(x) : 0.0; break;
      case FnKind::Ln: ok = x > 0.0; v = ok ? std::log(x) : 0.0; break;
    }
    if (ok && std::isfinite(v)) return make_number(v);
  }
  Expr e{};
  e.kind = Expr::Kind::Fn;
  e.fn = fn;
  e.a = std::move(a);
  return node(std::move(e));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct FnName {
  const char* name;
  FnKind kind;
};
constexpr FnName kFunctions[] = {
    {"sin", FnKind::Sin}, {"cos", FnKind::Cos}, {"exp", FnKind::Exp},
    {"sqrt", FnKind::Sqrt}, {"ln", FnKind::Ln},
};

class Parser {
 public:
  Parser(std::string_view source, std::span<const std::string> variables)
      : src_(source), variables_(variables) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::span<const std::string> variables_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+')) e = make_add(std::move(e), term());
      else if (eat('-')) e = make_sub(std::move(e), term());
      else return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*')) e = make_mul(std::move(e), factor());
      else if (eat('/')) e = make_div(std::move(e), factor());
      else return e;
    }
  }

  ExprPtr factor() {
    if (eat('-')) return make_neg(factor());
    ExprPtr e = atom();
    if (eat('^')) {
      skip_ws();
      std::size_t start = pos_;
      long exponent = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        exponent = exponent * 10 + (src_[pos_] - '0');
        if (exponent > 1000) throw ParseError("exponent too large", start);
        ++pos_;
      }
      if (pos_ == start) throw ParseError("expected integer exponent after '^'", pos_);
      e = make_pow(std::move(e), static_cast<int>(exponent));
    }
    return e;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("expected expression", pos_);
  }

  ExprPtr number() {
    std::size_t start = pos_;
    bool digits = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to something else ("2exp(x)" is still an error, later)
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    return make_number(std::strtod(text.c_str(), nullptr));
  }

  ExprPtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);
    for (const FnName& f : kFunctions) {
      if (name == f.name) {
        if (!eat('(')) throw ParseError("function '" + std::string(name) + "' needs an argument", start);
        ExprPtr arg = expr();
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        return make_fn(f.kind, std::move(arg));
      }
    }
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (name == variables_[i]) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '(')
          throw ParseError("variable '" + std::string(name) + "' used as a function", start);
        return make_var(static_cast<int>(i));
      }
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }
};

}  // namespace

ExprPtr parse(std::string_view source, std::span<const std::string> variables) {
  return Parser(source, variables).run();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// precedence: 1 add/sub, 2 mul/div, 3 unary minus, 4 pow, 5 atom
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Number: return e.number < 0 ? 3 : 5;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

const char* fn_name(FnKind fn) {
  switch (fn) {
    case FnKind::Sin: return "sin";
    case FnKind::Cos: return "cos";
    case FnKind::Exp: return "exp";
    case FnKind::Sqrt: return "sqrt";
    case FnKind::Ln: return "ln";
  }
  return "?";
}

void print_rec(const Expr& e, std::span<const std::string> vars, int min_prec, std::string& out) {
  const bool parens = precedence(e) < min_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.number);
      out += buf;
      break;
    }
    case Expr::Kind::Var:
      out += vars[static_cast<std::size_t>(e.var)];
      break;
    case Expr::Kind::Neg:
      out += '-';
      print_rec(*e.a, vars, 3, out);
      break;
    case Expr::Kind::Add:
      print_rec(*e.a, vars, 1, out);
      out += " + ";
      print_rec(*e.b, vars, 2, out);
      break;
    case Expr::Kind::Sub:
      print_rec(*e.a, vars, 1, out);
      out += " - ";
      print_rec(*e.b, vars, 2, out);
      break;
    case Expr::Kind::Mul:
      print_rec(*e.a, vars, 2, out);
      out += " * ";
      print_rec(*e.b, vars, 3, out);
      break;
    case Expr::Kind::Div:
      print_rec(*e.a, vars, 2, out);
      out += " / ";
      print_rec(*e.b, vars, 3, out);
      break;
    case Expr::Kind::Pow:
      print_rec(*e.a, vars, 5, out);
      out += '^';
      out += std::to_string(e.exponent);
      break;
    case Expr::Kind::Fn:
      out += fn_name(e.fn);
      out += '(';
      print_rec(*e.a, vars, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print(const Expr& e, std::span<const std::string> variables) {
  std::string out;
  print_rec(e, variables, 0, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number: return a.number == b.number;
    case Expr::Kind::Var: return a.var == b.var;
    case Expr::Kind::Neg: return structurally_equal(*a.a, *b.a);
    case Expr::Kind::Pow:
      return a.exponent == b.exponent && structurally_equal(*a.a, *b.a);
    case Expr::Kind::Fn: return a.fn == b.fn && structurally_equal(*a.a, *b.a);
    default:
      return structurally_equal(*a.a, *b.a) && structurally_equal(*a.b, *b.b);
  }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// One code path for both scalar backends; Ops supplies the ring operations.
template <class Ops>
typename Ops::Scalar eval_rec(const Expr& e, const Ops& ops) {
  using S = typename Ops::Scalar;
  switch (e.kind) {
    case Expr::Kind::Number: return ops.number(e.number);
    case Expr::Kind::Var: return ops.var(e.var);
    case Expr::Kind::Neg: return ops.neg(eval_rec(*e.a, ops));
    case Expr::Kind::Add: return ops.add(eval_rec(*e.a, ops), eval_rec(*e.b, ops));
    case Expr::Kind::Sub: return ops.sub(eval_rec(*e.a, ops), eval_rec(*e.b, ops));
    case Expr::Kind::Mul: return ops.mul(eval_rec(*e.a, ops), eval_rec(*e.b, ops));
    case Expr::Kind::Div: return ops.div(eval_rec(*e.a, ops), eval_rec(*e.b, ops));
    case Expr::Kind::Pow: {
      S base = eval_rec(*e.a, ops);
      S acc = ops.number(1.0);
      for (int i = 0; i < e.exponent; ++i) acc = ops.mul(acc, base);
      return acc;
    }
    case Expr::Kind::Fn: return ops.fn(e.fn, eval_rec(*e.a, ops));
  }
  throw Error("eval: corrupt expression node");
}

struct RealOps {
  using Scalar = double;
  std::span<const double> env;
  double inv_tol;

  double number(double v) const { return v; }
  double var(int i) const { return env[static_cast<std::size_t>(i)]; }
  double neg(double a) const { return -a; }
  double add(double a, double b) const { return a + b; }
  double sub(double a, double b) const { return a - b; }
  double mul(double a, double b) const { return a * b; }
  double div(double a, double b) const {
    if (std::abs(b) <= inv_tol) throw DomainError("division by a non-invertible scalar");
    return a / b;
  }
  double fn(FnKind f, double a) const {
    switch (f) {
      case FnKind::Sin: return std::sin(a);
      case FnKind::Cos: return std::cos(a);
      case FnKind::Exp: return std::exp(a);
      case FnKind::Sqrt:
        if (a < 0.0) throw DomainError("sqrt: negative argument");
        return std::sqrt(a);
      case FnKind::Ln:
        if (a <= 0.0) throw DomainError("ln: nonpositive argument");
        return std::log(a);
    }
    throw Error("eval: corrupt function node");
  }
};

struct WeilOps {
  using Scalar = weil::Element;
  const weil::BlockSpec& spec;
  std::span<const weil::Element> env;
  double inv_tol;

  weil::Element number(double v) const { return weil::Element::constant(spec, v); }
  weil::Element var(int i) const { return env[static_cast<std::size_t>(i)]; }
  weil::Element neg(const weil::Element& a) const { return -a; }
  weil::Element add(weil::Element a, const weil::Element& b) const { return a + b; }
  weil::Element sub(weil::Element a, const weil::Element& b) const { return a - b; }
  weil::Element mul(const weil::Element& a, const weil::Element& b) const { return a * b; }
  weil::Element div(const weil::Element& a, const weil::Element& b) const {
    return a * weil::invert(b, inv_tol);
  }
  weil::Element fn(FnKind f, const weil::Element& a) const {
    switch (f) {
      case FnKind::Sin: return weil::evaluate_smooth(weil::sin_derivative, a);
      case FnKind::Cos: return weil::evaluate_smooth(weil::cos_derivative, a);
      case FnKind::Exp: return weil::evaluate_smooth(weil::exp_derivative, a);
      case FnKind::Sqrt: return weil::evaluate_smooth(weil::sqrt_derivative, a);
      case FnKind::Ln: return weil::evaluate_smooth(weil::ln_derivative, a);
    }
    throw Error("eval: corrupt function node");
  }
};

}  // namespace

double eval(const Expr& e, std::span<const double> env, double inv_tol) {
  return eval_rec(e, RealOps{env, inv_tol});
}

weil::Element eval(const Expr& e, const weil::BlockSpec& spec,
                   std::span<const weil::Element> env, double inv_tol) {
  return eval_rec(e, WeilOps{spec, env, inv_tol});
}

// ---------------------------------------------------------------------------
// Symbolic differentiation

ExprPtr differentiate(const Expr& e, int var) {
  switch (e.kind) {
    case Expr::Kind::Number: return make_number(0.0);
    case Expr::Kind::Var: return make_number(e.var == var ? 1.0 : 0.0);
    case Expr::Kind::Neg: return make_neg(differentiate(*e.a, var));
    case Expr::Kind::Add:
      return make_add(differentiate(*e.a, var), differentiate(*e.b, var));
    case Expr::Kind::Sub:
      return make_sub(differentiate(*e.a, var), differentiate(*e.b, var));
    case Expr::Kind::Mul:
      return make_add(make_mul(differentiate(*e.a, var), e.b),
                      make_mul(e.a, differentiate(*e.b, var)));
    case Expr::Kind::Div:
      return make_div(make_sub(make_mul(differentiate(*e.a, var), e.b),
                               make_mul(e.a, differentiate(*e.b, var))),
                      make_pow(e.b, 2));
    case Expr::Kind::Pow:
      return make_mul(make_mul(make_number(e.exponent), make_pow(e.a, e.exponent - 1)),
                      differentiate(*e.a, var));
    case Expr::Kind::Fn: {
      ExprPtr da = differentiate(*e.a, var);
      switch (e.fn) {
        case FnKind::Sin: return make_mul(make_fn(FnKind::Cos, e.a), da);
        case FnKind::Cos: return make_neg(make_mul(make_fn(FnKind::Sin, e.a), da));
        case FnKind::Exp: return make_mul(make_fn(FnKind::Exp, e.a), da);
        case FnKind::Sqrt:
          return make_div(da, make_mul(make_number(2.0), make_fn(FnKind::Sqrt, e.a)));
        case FnKind::Ln: return make_div(da, e.a);
      }
      break;
    }
  }
  throw Error("differentiate: corrupt expression node");
}

// ---------------------------------------------------------------------------
// Pde

const std::array<std::string, 5> Pde::variable_names = {"x", "y", "z", "p", "q"};

double Pde::value(std::span<const double, 5> point) const { return eval(*psi, point); }

std::array<double, 5> Pde::gradient(std::span<const double, 5> point) const {
  std::array<double, 5> g;
  for (std::size_t i = 0; i < 5; ++i) g[i] = eval(*partials[i], point);
  return g;
}

Pde make_pde(std::string_view source) {
  Pde pde;
  pde.source = std::string(source);
  pde.psi = parse(source, Pde::variable_names);
  for (int i = 0; i < 5; ++i)
    pde.partials[static_cast<std::size_t>(i)] = differentiate(*pde.psi, i);
  return pde;
}

}  // namespace charpit
