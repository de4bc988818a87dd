#include "charpit/weil.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace charpit::weil {

BlockSpec::BlockSpec(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error("BlockSpec needs at least one block");
  for (const Block& b : blocks_) {
    if (b.generators < 1 || b.cap < 1)
      throw Error("BlockSpec: generator counts and caps must be >= 1");
    total_generators_ += b.generators;
  }
}

BlockSpec BlockSpec::single(int generators, int cap) {
  return BlockSpec({Block{generators, cap}});
}

int BlockSpec::generator_offset(int b) const {
  if (b < 0 || b >= block_count()) throw Error("BlockSpec: block index out of range");
  int off = 0;
  for (int i = 0; i < b; ++i) off += blocks_[static_cast<std::size_t>(i)].generators;
  return off;
}

int BlockSpec::total_cap() const {
  int cap = 0;
  for (const Block& b : blocks_) cap += b.cap;
  return cap;
}

bool BlockSpec::admits(const std::vector<std::uint8_t>& exponents) const {
  int g = 0;
  for (const Block& b : blocks_) {
    int degree = 0;
    for (int i = 0; i < b.generators; ++i) degree += exponents[static_cast<std::size_t>(g + i)];
    if (degree > b.cap) return false;
    g += b.generators;
  }
  return true;
}

Element::Element(BlockSpec spec) : spec_(std::move(spec)) {}

Element Element::constant(const BlockSpec& spec, double value) {
  Element e(spec);
  e.add_term(Monomial(static_cast<std::size_t>(spec.generator_count()), 0), value);
  return e;
}

Element Element::generator(const BlockSpec& spec, int block, int index) {
  if (block < 0 || block >= spec.block_count())
    throw Error("generator: block index out of range");
  if (index < 0 || index >= spec.block(block).generators)
    throw Error("generator: generator index out of range");
  Element e(spec);
  Monomial m(static_cast<std::size_t>(spec.generator_count()), 0);
  m[static_cast<std::size_t>(spec.generator_offset(block) + index)] = 1;
  e.add_term(m, 1.0);
  return e;
}

void Element::add_term(const Monomial& m, double coeff) {
  if (coeff == 0.0) return;
  if (!spec_.admits(m)) return;  // structural truncation
  auto [it, inserted] = terms_.try_emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Element::constant_part() const {
  Monomial zero(static_cast<std::size_t>(spec_.generator_count()), 0);
  auto it = terms_.find(zero);
  return it == terms_.end() ? 0.0 : it->second;
}

double Element::linear_coefficient(int g) const {
  Monomial m(static_cast<std::size_t>(spec_.generator_count()), 0);
  m.at(static_cast<std::size_t>(g)) = 1;
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

Element Element::coefficient_of(int g) const {
  Element out(spec_);
  const auto gi = static_cast<std::size_t>(g);
  for (const auto& [m, c] : terms_) {
    if (m.at(gi) != 1) continue;
    Monomial reduced = m;
    reduced[gi] = 0;
    out.add_term(reduced, c);
  }
  return out;
}

bool Element::is_zero(double tol) const {
  if (tol <= 0.0) return terms_.empty();
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) return false;
  return true;
}

Element Element::operator-() const {
  Element out(spec_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Element& Element::operator+=(const Element& rhs) {
  if (!(spec_ == rhs.spec_)) throw Error("Element: mismatched block specs");
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

Element& Element::operator-=(const Element& rhs) {
  if (!(spec_ == rhs.spec_)) throw Error("Element: mismatched block specs");
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

Element operator*(const Element& a, const Element& b) {
  if (!(a.spec_ == b.spec_)) throw Error("Element: mismatched block specs");
  Element out(a.spec_);
  const std::size_t n = static_cast<std::size_t>(a.spec_.generator_count());
  Element::Monomial m(n, 0);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      bool overflow = false;
      for (std::size_t i = 0; i < n; ++i) {
        int e = ma[i] + mb[i];
        if (e > 255) { overflow = true; break; }
        m[i] = static_cast<std::uint8_t>(e);
      }
      if (!overflow) out.add_term(m, ca * cb);
    }
  }
  return out;
}

Element& Element::operator+=(double c) {
  add_term(Monomial(static_cast<std::size_t>(spec_.generator_count()), 0), c);
  return *this;
}

Element operator+(Element a, double c) {
  a += c;
  return a;
}

Element operator*(Element a, double c) {
  if (c == 0.0) return Element(a.spec_);
  for (auto& [m, coeff] : a.terms_) coeff *= c;
  // scaling by a finite nonzero c cannot create exact zeros from nonzeros,
  // except via underflow; re-canonicalize to be safe
  for (auto it = a.terms_.begin(); it != a.terms_.end();) {
    if (it->second == 0.0) it = a.terms_.erase(it);
    else ++it;
  }
  return a;
}

bool Element::operator==(const Element& other) const {
  return spec_ == other.spec_ && terms_ == other.terms_;
}

std::string Element::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    first = false;
    out << std::abs(c);
    for (std::size_t g = 0; g < m.size(); ++g) {
      if (m[g] == 0) continue;
      out << " e" << (g + 1);
      if (m[g] > 1) out << "^" << static_cast<int>(m[g]);
    }
  }
  return out.str();
}

Element add(const Element& a, const Element& b) { return a + b; }
Element mul(const Element& a, const Element& b) { return a * b; }
Element scale(const Element& a, double c) { return a * c; }

KlDecomposition kl_decompose(const Element& a) {
  const int n = a.spec().generator_count();
  KlDecomposition out{0.0, std::vector<double>(static_cast<std::size_t>(n), 0.0), Element(a.spec())};
  for (const auto& [m, c] : a.terms()) {
    int degree = 0;
    int last = -1;
    for (int g = 0; g < n; ++g) {
      degree += m[static_cast<std::size_t>(g)];
      if (m[static_cast<std::size_t>(g)] > 0) last = g;
    }
    if (degree == 0) out.constant = c;
    else if (degree == 1) out.linear[static_cast<std::size_t>(last)] = c;
    else out.rest.add_term(m, c);
  }
  return out;
}

Element evaluate_smooth(const DerivativeRule& derivatives, const Element& a) {
  const double c = a.constant_part();
  Element nilpotent = a - Element::constant(a.spec(), c);
  Element result = Element::constant(a.spec(), derivatives(0, c));
  Element power = Element::constant(a.spec(), 1.0);
  double factorial = 1.0;
  const int order = a.spec().total_cap();
  for (int k = 1; k <= order; ++k) {
    power = power * nilpotent;
    if (power.is_zero()) break;
    factorial *= k;
    result += power * (derivatives(k, c) / factorial);
  }
  return result;
}

Element invert(const Element& a, double inv_tol) {
  if (std::abs(a.constant_part()) <= inv_tol)
    throw DomainError("invert: constant part not invertible");
  return evaluate_smooth(
      [](int k, double at) {
        // d^k/dx^k (1/x) = (-1)^k k! / x^(k+1)
        double v = 1.0 / at;
        for (int i = 0; i < k; ++i) v *= -(i + 1) / at;
        return v;
      },
      a);
}

double sin_derivative(int k, double at) {
  switch (k % 4) {
    case 0: return std::sin(at);
    case 1: return std::cos(at);
    case 2: return -std::sin(at);
    default: return -std::cos(at);
  }
}

double cos_derivative(int k, double at) { return sin_derivative(k + 1, at); }

double exp_derivative(int, double at) { return std::exp(at); }

double sqrt_derivative(int k, double at) {
  if (at <= 0.0) throw DomainError("sqrt: nonpositive argument");
  double v = std::sqrt(at);
  for (int i = 0; i < k; ++i) v *= (0.5 - i) / at;
  return v;
}

double ln_derivative(int k, double at) {
  if (at <= 0.0) throw DomainError("ln: nonpositive argument");
  if (k == 0) return std::log(at);
  // d^k/dx^k ln x = (-1)^(k-1) (k-1)! / x^k
  double v = 1.0 / at;
  for (int i = 1; i < k; ++i) v *= -i / at;
  return v;
}

}  // namespace charpit::weil
