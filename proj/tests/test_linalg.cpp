#include <doctest.h>

#include <cmath>
#include <random>

#include "charpit/linalg.hpp"

using namespace charpit;

TEST_SUITE("linalg") {
  TEST_CASE("proportionality_factor") {
    const double a[] = {2, 0, 2, 0, 0};
    const double b[] = {1, 0, 1, 0, 0};
    auto lambda = proportionality_factor(a, b);
    REQUIRE(lambda.has_value());
    CHECK(*lambda == 0.5);

    const double a2[] = {1, 2};
    const double zero[] = {0, 0};
    CHECK(proportionality_factor(a2, zero) == 0.0);

    const double b2[] = {2, 1};
    CHECK_FALSE(proportionality_factor(a2, b2).has_value());

    const double improper[] = {1e-12, 0};
    CHECK_THROWS_AS(proportionality_factor(improper, a2), Error);
  }

  TEST_CASE("kernel_containment_generic") {
    const double a[] = {1.2, 1.6};
    const double b[] = {0.6, 0.8};
    CHECK(kernel_containment_generic(a, b));

    const double ex[] = {1, 0};
    const double ey[] = {0, 1};
    CHECK_FALSE(kernel_containment_generic(ex, ey));

    const double zero[] = {0, 0};
    CHECK(kernel_containment_generic(ex, zero));

    const double one[] = {2.0};
    const double other[] = {-3.5};
    CHECK(kernel_containment_generic(one, other));  // kernel is {0} for n = 1
  }

  TEST_CASE("system_containment_factor") {
    // the calotte system of the eikonal at slope (1,0) against a point
    // displacement along the characteristic direction
    const AugmentedSystem psi{2, 0, 0, 0};
    const AugmentedSystem d{0.01, 0, 0, 0};
    auto lambda = system_containment_factor(psi, d);
    REQUIRE(lambda.has_value());
    CHECK(*lambda == 0.005);

    CHECK(system_containment_factor(psi, psi) == 1.0);

    const AugmentedSystem sideways{0, 0.01, 0, 0};
    CHECK_FALSE(system_containment_factor(psi, sideways).has_value());

    CHECK_THROWS_AS(system_containment_factor({0, 0, 1, 1}, d), Error);
  }

  TEST_CASE("solve_staircase") {
    const StaircaseSolution a = solve_staircase({2, 0, 0, 0});
    CHECK(a.particular == std::array<double, 3>{0, 0, 0});
    CHECK(a.kernel == std::array<double, 3>{0, 0, 1});

    const StaircaseSolution b = solve_staircase({1, 2, 0, 0});
    // kernel direction (4, -2, 1): check both rows by hand
    // 1*4 + 2*(-2) = 0 and 1*(-2) + 2*1 = 0
    const double n = std::sqrt(21.0);
    CHECK(b.kernel[0] == doctest::Approx(4 / n).epsilon(1e-15));
    CHECK(b.kernel[1] == doctest::Approx(-2 / n).epsilon(1e-15));
    CHECK(b.kernel[2] == doctest::Approx(1 / n).epsilon(1e-15));
    CHECK(b.particular == std::array<double, 3>{0, 0, 0});

    const StaircaseSolution c = solve_staircase({1, 0, 3, 5});
    CHECK(c.particular == std::array<double, 3>{3, 5, 0});
    CHECK(c.kernel == std::array<double, 3>{0, 0, 1});

    CHECK_THROWS_AS(solve_staircase({0, 0, 1, 1}), Error);
  }

  TEST_CASE("staircase residuals on random proper systems") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int i = 0; i < 200; ++i) {
      AugmentedSystem sys{u(rng), u(rng), u(rng), u(rng)};
      if (!is_proper(sys)) continue;
      const StaircaseSolution sol = solve_staircase(sys);
      const double c = u(rng);
      const double r = sol.particular[0] + c * sol.kernel[0];
      const double s = sol.particular[1] + c * sol.kernel[1];
      const double t = sol.particular[2] + c * sol.kernel[2];
      const double scale =
          std::max({1.0, std::abs(sys.p1 * r), std::abs(sys.p2 * s),
                    std::abs(sys.p1 * s), std::abs(sys.p2 * t)});
      CHECK(std::abs(sys.p1 * r + sys.p2 * s - sys.r1) <= 1e-12 * scale);
      CHECK(std::abs(sys.p1 * s + sys.p2 * t - sys.r2) <= 1e-12 * scale);
    }
  }

  TEST_CASE("containment factor transfers solutions between systems") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 100; ++i) {
      AugmentedSystem a{u(rng), u(rng), u(rng), u(rng)};
      if (!is_proper(a)) continue;
      const double lambda = u(rng);
      const AugmentedSystem b{lambda * a.p1, lambda * a.p2, lambda * a.r1,
                              lambda * a.r2};
      auto found = system_containment_factor(a, b);
      REQUIRE(found.has_value());
      CHECK(*found == doctest::Approx(lambda).epsilon(1e-12));

      // every solution of a solves b
      const StaircaseSolution sol = solve_staircase(a);
      for (double c : {-2.0, 0.0, 1.5}) {
        const double r = sol.particular[0] + c * sol.kernel[0];
        const double s = sol.particular[1] + c * sol.kernel[1];
        const double t = sol.particular[2] + c * sol.kernel[2];
        const double scale = std::max({1.0, std::abs(b.p1 * r), std::abs(b.p2 * s),
                                       std::abs(b.p1 * s), std::abs(b.p2 * t)});
        CHECK(std::abs(b.p1 * r + b.p2 * s - b.r1) <= 1e-9 * scale);
        CHECK(std::abs(b.p1 * s + b.p2 * t - b.r2) <= 1e-9 * scale);
      }
    }
  }

  TEST_CASE("base point check") {
    for (int n : {1, 2, 3, 5}) CHECK(is_base_point_only_zero(n));

    const double zero3[] = {0, 0, 0};
    const BasePointCheck ok = base_point_check(zero3);
    CHECK(ok.coefficients_match);
    CHECK(ok.accepted);

    const double off[] = {0, 0.25, 0};
    const BasePointCheck bad = base_point_check(off);
    CHECK(bad.coefficients_match);
    CHECK_FALSE(bad.accepted);
  }
}
