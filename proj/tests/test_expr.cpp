#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "charpit/expr.hpp"
#include "sample_pdes.hpp"

using namespace charpit;

namespace {

const std::vector<std::string> kPdeVars = {"x", "y", "z", "p", "q"};

std::size_t offset_of(const char* source, std::span<const std::string> vars) {
  try {
    parse(source, vars);
  } catch (const ParseError& e) {
    return e.offset;
  }
  return static_cast<std::size_t>(-1);
}

// Random canonical AST for the round-trip property.
ExprPtr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
  static const double numbers[] = {0.0, 1.0, 2.0, 0.5, -1.5, 3.0, 0.3333333333333333};
  switch (pick(rng)) {
    case 0: return make_number(numbers[rng() % 7]);
    case 1: return make_var(static_cast<int>(rng() % 5));
    case 2: return make_neg(random_expr(rng, depth - 1));
    case 3: return make_add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4: return make_sub(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: return make_mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6: return make_div(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 7: return make_pow(random_expr(rng, depth - 1), static_cast<int>(rng() % 5));
    default:
      return make_fn(static_cast<FnKind>(rng() % 5), random_expr(rng, depth - 1));
  }
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("parse") {
    const ExprPtr e = parse("p^2 + q^2 - 1", kPdeVars);
    const ExprPtr manual = make_sub(
        make_add(make_pow(make_var(3), 2), make_pow(make_var(4), 2)), make_number(1));
    CHECK(structurally_equal(*e, *manual));

    const ExprPtr f = parse("z - p*x - q*y", kPdeVars);
    const ExprPtr manual_f = make_sub(make_sub(make_var(2), make_mul(make_var(3), make_var(0))),
                                      make_mul(make_var(4), make_var(1)));
    CHECK(structurally_equal(*f, *manual_f));
  }

  TEST_CASE("parse errors carry byte offsets") {
    CHECK(offset_of("p^2 + * q", kPdeVars) == 6);
    CHECK(offset_of("p + foo", kPdeVars) == 4);   // unknown identifier
    CHECK(offset_of("sin + 1", kPdeVars) == 0);   // function without argument
    CHECK(offset_of("x(2)", kPdeVars) == 0);      // variable used as function
    CHECK(offset_of("p q", kPdeVars) == 2);       // trailing input
    CHECK(offset_of("p^-1", kPdeVars) == 2);      // exponent must be digits
    CHECK(offset_of("(p + q", kPdeVars) == 6);    // unbalanced parenthesis
  }

  TEST_CASE("eval over reals") {
    const ExprPtr e = parse("p^2 + q^2 - 1", kPdeVars);
    const double env[] = {0, 0, 0, 0.6, 0.8};
    CHECK(std::abs(eval(*e, env)) <= 1e-15);

    const double env2[] = {0.5, 2.0, 0, 1.5, 0};
    CHECK(eval(*parse("x*p + exp(y)/2", kPdeVars), env2) ==
          doctest::Approx(0.75 + std::exp(2.0) / 2).epsilon(1e-15));
  }

  TEST_CASE("eval error paths") {
    const double env[] = {2, 0, 0, 0, 0};
    CHECK_THROWS_AS(eval(*parse("1 / (x - 2)", kPdeVars), env), DomainError);
    CHECK_THROWS_AS(eval(*parse("ln(0 - x)", kPdeVars), env), DomainError);
    CHECK_THROWS_AS(eval(*parse("sqrt(0 - x)", kPdeVars), env), DomainError);
  }

  TEST_CASE("eval over the ring") {
    using weil::BlockSpec;
    using weil::Element;
    const BlockSpec d1 = BlockSpec::single(1, 1);
    const Element eps = Element::generator(d1, 0, 0);

    const ExprPtr e = parse("p^2 + q^2 - 1", kPdeVars);
    std::vector<Element> env(5, Element(d1));
    env[3] = eps + 1.0;
    const Element v = eval(*e, d1, env);
    CHECK(v == eps * 2.0);  // (1 + eps)^2 - 1 collapses structurally

    std::vector<Element> env2(5, Element(d1));
    env2[0] = Element::constant(d1, 2.0);
    env2[3] = eps;
    CHECK(eval(*parse("x * p", kPdeVars), d1, env2) == eps * 2.0);

    // division through the ring: (1 + eps) / (1 + eps) = 1 exactly
    std::vector<Element> env3(5, Element(d1));
    env3[3] = eps + 1.0;
    CHECK(eval(*parse("p / p", kPdeVars), d1, env3) == Element::constant(d1, 1.0));
    CHECK_THROWS_AS(eval(*parse("1 / q", kPdeVars), d1, env3), DomainError);
  }

  TEST_CASE("real eval agrees with constant-part eval in the ring") {
    std::mt19937_64 rng(23);
    const weil::BlockSpec d1 = weil::BlockSpec::single(1, 1);
    for (const char* source : sample::kAll) {
      const ExprPtr e = parse(source, kPdeVars);
      for (int i = 0; i < 25; ++i) {
        double env[5];
        std::vector<weil::Element> wenv;
        for (double& v : env) {
          v = sample::uniform(rng, -2, 2);
          wenv.push_back(weil::Element::constant(d1, v));
        }
        const weil::Element w = eval(*e, d1, wenv);
        CHECK(w.constant_part() == eval(*e, env));
        CHECK((w - w.constant_part() * weil::Element::constant(d1, 1.0)).is_zero());
      }
    }
  }

  TEST_CASE("differentiate") {
    const ExprPtr e = parse("p^2 + q^2 - 1", kPdeVars);
    CHECK(structurally_equal(*differentiate(*e, 3), *parse("2*p", kPdeVars)));
    CHECK(structurally_equal(*differentiate(*parse("z - p*x - q*y", kPdeVars), 2),
                             *make_number(1.0)));
    CHECK(structurally_equal(*differentiate(*parse("sin(x*p)", kPdeVars), 0),
                             *parse("cos(x*p)*p", kPdeVars)));
  }

  TEST_CASE("make_pde") {
    const Pde eik = make_pde("p^2+q^2-1");
    CHECK(structurally_equal(*eik.partials[3], *parse("2*p", kPdeVars)));
    CHECK(structurally_equal(*eik.partials[4], *parse("2*q", kPdeVars)));
    for (int i = 0; i < 3; ++i)
      CHECK(structurally_equal(*eik.partials[static_cast<std::size_t>(i)], *make_number(0.0)));

    const Pde lin = make_pde("p + 2*q - 3");
    const double expected[] = {0, 0, 0, 1, 2};
    const double at[] = {0.3, -0.7, 1.1, 0.2, 0.9};
    const std::array<double, 5> grad = lin.gradient(at);
    for (int i = 0; i < 5; ++i)
      CHECK(grad[static_cast<std::size_t>(i)] == expected[i]);

    const Pde quasi = make_pde("z - p*x - q*y");
    CHECK(structurally_equal(*quasi.partials[0], *make_neg(make_var(3))));
    CHECK(structurally_equal(*quasi.partials[2], *make_number(1.0)));
    CHECK(structurally_equal(*quasi.partials[3], *make_neg(make_var(0))));

    CHECK_THROWS_AS(make_pde("p^2 + * q"), ParseError);
  }

  TEST_CASE("print/parse round trip") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 500; ++i) {
      const ExprPtr e = random_expr(rng, 5);
      const std::string text = print(*e, kPdeVars);
      CAPTURE(text);
      const ExprPtr back = parse(text, kPdeVars);
      CHECK(structurally_equal(*e, *back));
    }
  }

  TEST_CASE("symbolic derivative matches first-order ring coefficient") {
    std::mt19937_64 rng(31);
    const weil::BlockSpec d1 = weil::BlockSpec::single(1, 1);
    for (const char* source : sample::kAll) {
      const ExprPtr psi = parse(source, kPdeVars);
      std::array<ExprPtr, 5> grad;
      for (int v = 0; v < 5; ++v) grad[static_cast<std::size_t>(v)] = differentiate(*psi, v);
      for (int i = 0; i < 25; ++i) {
        double env[5];
        for (double& v : env) v = sample::uniform(rng, -2, 2);
        for (int v = 0; v < 5; ++v) {
          std::vector<weil::Element> wenv;
          for (int j = 0; j < 5; ++j) {
            weil::Element w = weil::Element::constant(d1, env[j]);
            if (j == v) w += weil::Element::generator(d1, 0, 0);
            wenv.push_back(w);
          }
          const double symbolic = eval(*grad[static_cast<std::size_t>(v)], env);
          const double generic = eval(*psi, d1, wenv).linear_coefficient(0);
          CHECK(std::abs(symbolic - generic) <=
                1e-12 * std::max({1.0, std::abs(symbolic), std::abs(generic)}));
        }
      }
    }
  }
}
