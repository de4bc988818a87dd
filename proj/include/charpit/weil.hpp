#pragma once

// Exact arithmetic in truncated polynomial rings
//
//   R[e_1, ..., e_n] / (monomials whose within-block total degree exceeds
//                       that block's cap)
//
// Generators are grouped into blocks; a block of n generators with cap k
// models the k-th order infinitesimal neighbourhood of 0 in R^n (cap 1 is
// the usual "square zero" case, where any product of two generators from
// the same block vanishes).  Several blocks model independent infinitesimals:
// a product of generators from different blocks survives as long as each
// block's own degree stays within its cap.
//
// Truncation is structural -- offending monomials are deleted, not rounded --
// so identities that hold by nilpotency hold with tolerance zero.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "charpit/errors.hpp"

namespace charpit::weil {

struct Block {
  int generators = 1;
  int cap = 1;  ///< max within-block total degree
};

/// Shape of the ring: one or more generator blocks with degree caps.
class BlockSpec {
 public:
  explicit BlockSpec(std::vector<Block> blocks);

  /// Single block of `generators` generators, all sharing one degree cap.
  static BlockSpec single(int generators, int cap = 1);

  int block_count() const { return static_cast<int>(blocks_.size()); }
  const Block& block(int b) const { return blocks_.at(static_cast<std::size_t>(b)); }
  int generator_count() const { return total_generators_; }
  /// Index of the first generator of block `b` in the flat generator order.
  int generator_offset(int b) const;
  /// Sum of all block caps: total degree past which every monomial dies.
  int total_cap() const;

  /// True when the exponent vector respects every block's cap.
  bool admits(const std::vector<std::uint8_t>& exponents) const;

  bool operator==(const BlockSpec& other) const { return blocks_ == other.blocks_; }

 private:
  std::vector<Block> blocks_;
  int total_generators_ = 0;
};

inline bool operator==(const Block& a, const Block& b) {
  return a.generators == b.generators && a.cap == b.cap;
}

/// An element of the truncated ring, kept canonical: no stored monomial
/// violates a cap and no stored coefficient is exactly zero.
class Element {
 public:
  using Monomial = std::vector<std::uint8_t>;  // dense, one exponent per generator

  explicit Element(BlockSpec spec);  // zero
  static Element constant(const BlockSpec& spec, double value);
  static Element generator(const BlockSpec& spec, int block, int index);

  const BlockSpec& spec() const { return spec_; }
  const std::map<Monomial, double>& terms() const { return terms_; }

  double constant_part() const;
  /// Coefficient of the lone degree-1 monomial in generator `g`.
  double linear_coefficient(int g) const;
  /// Partial coefficient: sum over terms with exponent of `g` exactly 1,
  /// with that exponent removed.  An Element in the remaining generators.
  Element coefficient_of(int g) const;

  /// True when the canonical term map is empty; with `tol > 0`, true when
  /// every coefficient is within tol (for values built from floating data).
  bool is_zero(double tol = 0.0) const;

  Element operator-() const;
  Element& operator+=(const Element& rhs);
  Element& operator-=(const Element& rhs);
  Element& operator+=(double c);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator+(Element a, double c);
  friend Element operator+(double c, Element a) { return std::move(a) + c; }
  friend Element operator-(Element a, double c) { return std::move(a) + (-c); }
  friend Element operator-(double c, const Element& a) { return (-a) + c; }
  friend Element operator*(Element a, double c);
  friend Element operator*(double c, Element a) { return std::move(a) * c; }

  bool operator==(const Element& other) const;

  std::string to_string() const;

  /// Inserts `coeff * monomial`, dropping the term if the monomial violates
  /// a cap or the accumulated coefficient becomes exactly zero.
  void add_term(const Monomial& m, double coeff);

 private:
  BlockSpec spec_;
  std::map<Monomial, double> terms_;
};

Element add(const Element& a, const Element& b);
Element mul(const Element& a, const Element& b);
Element scale(const Element& a, double c);

/// constant + sum of linear coefficients * generators + rest; reassembly
/// reproduces the input exactly.
struct KlDecomposition {
  double constant = 0.0;
  std::vector<double> linear;  // one per generator
  Element rest;
};

KlDecomposition kl_decompose(const Element& a);

/// k-th derivative of a smooth scalar primitive at a real point.
/// Throws DomainError outside the primitive's domain.
using DerivativeRule = std::function<double(int k, double at)>;

/// Taylor-expands the primitive about the constant part of `a` and applies
/// it to the nilpotent part.  Exact: powers of the nilpotent part vanish
/// structurally beyond the sum of the block caps.
Element evaluate_smooth(const DerivativeRule& derivatives, const Element& a);

/// Multiplicative inverse of an element with |constant part| > inv_tol.
Element invert(const Element& a, double inv_tol = 1e-9);

// Derivative rules for the primitives the expression language knows.
double sin_derivative(int k, double at);
double cos_derivative(int k, double at);
double exp_derivative(int k, double at);
double sqrt_derivative(int k, double at);  // DomainError at nonpositive points
double ln_derivative(int k, double at);    // DomainError at nonpositive points

}  // namespace charpit::weil
