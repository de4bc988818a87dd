#pragma once

// Expression language for defining functions psi(x,y,z,p,q), graph surfaces
// f(x,y) and curve components x(s), y(s), z(s).
//
// Grammar (whitespace insignificant, binary operators left-associative):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ('^' digits)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
// Identifiers are the declared variables plus sin, cos, exp, sqrt, ln.
// Power exponents are nonnegative integer literals.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "charpit/errors.hpp"
#include "charpit/weil.hpp"

namespace charpit {

enum class FnKind : std::uint8_t { Sin, Cos, Exp, Sqrt, Ln };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable AST node.  Build through the factory functions below, which
/// fold constant subtrees and eliminate 0/1 identities so that structurally
/// equal inputs produce structurally equal trees.
struct Expr {
  enum class Kind : std::uint8_t { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Fn };

  Kind kind;
  double number = 0.0;  // Number
  int var = -1;         // Var: index into the declared variable list
  int exponent = 0;     // Pow
  FnKind fn = FnKind::Sin;
  ExprPtr a, b;
};

ExprPtr make_number(double v);
ExprPtr make_var(int index);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr a, int exponent);
ExprPtr make_fn(FnKind fn, ExprPtr a);

/// Parses `source` over the declared variable names.  Throws ParseError with
/// the byte offset of the first offending character.
ExprPtr parse(std::string_view source, std::span<const std::string> variables);

/// Minimal-parenthesis rendering; parse(print(e)) is structurally identical
/// to e over the same variable list.
std::string print(const Expr& e, std::span<const std::string> variables);

bool structurally_equal(const Expr& a, const Expr& b);

/// Evaluation over the reals.  env is indexed by variable index.
/// Division by |denominator| <= inv_tol and out-of-domain function arguments
/// throw DomainError.
double eval(const Expr& e, std::span<const double> env, double inv_tol = 1e-9);

/// Evaluation over the truncated ring: function applications Taylor-expand
/// about the constant part, division inverts through the ring.
weil::Element eval(const Expr& e, const weil::BlockSpec& spec,
                   std::span<const weil::Element> env, double inv_tol = 1e-9);

/// Exact symbolic partial derivative; simplified only by constant folding
/// and zero/one elimination.
ExprPtr differentiate(const Expr& e, int var);

/// A first-order PDE psi(x,y,z,p,q) = 0 with its five symbolic partials.
struct Pde {
  static const std::array<std::string, 5> variable_names;  // x, y, z, p, q

  std::string source;
  ExprPtr psi;
  std::array<ExprPtr, 5> partials;  // psi_x, psi_y, psi_z, psi_p, psi_q

  double value(std::span<const double, 5> point) const;
  std::array<double, 5> gradient(std::span<const double, 5> point) const;
};

Pde make_pde(std::string_view source);

}  // namespace charpit
