#include <doctest.h>

#include <cmath>
#include <random>

#include "charpit/jets.hpp"

using namespace charpit;
using weil::BlockSpec;
using weil::Element;

TEST_SUITE("jets") {
  TEST_CASE("restriction") {
    const Calotte<double> k{0, 0, 0, 1, 2, 3, 4, 5};
    const SurfaceElement<double> p = restriction(k);
    CHECK(p.x == 0);
    CHECK(p.p == 1);
    CHECK(p.q == 2);

    const Calotte<double> flat{1, 1, 1, 0, 0, 0, 0, 0};
    const SurfaceElement<double> pf = restriction(flat);
    CHECK(pf.z == 1);
    CHECK(pf.p == 0);

    // restriction of any extension through an element recovers the element
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 20; ++i) {
      const SurfaceElement<double> e{u(rng), u(rng), u(rng), u(rng), u(rng)};
      const Calotte<double> ext{e.x, e.y, e.z, e.p, e.q, u(rng), u(rng), u(rng)};
      const SurfaceElement<double> back = restriction(ext);
      CHECK(back.x == e.x);
      CHECK(back.y == e.y);
      CHECK(back.z == e.z);
      CHECK(back.p == e.p);
      CHECK(back.q == e.q);
    }
  }

  TEST_CASE("element_point") {
    const SurfaceElement<double> p{0, 0, 0, 1, 2};
    const double h = 0.25;
    const SurfaceElement<double> p10{0, 0, 0, 1, 0};
    const std::array<double, 3> pt = element_point(p10, h, 0.0);
    CHECK(pt[0] == h);
    CHECK(pt[1] == 0);
    CHECK(pt[2] == h);

    const std::array<double, 3> base = element_point(p, 0.0, 0.0);
    CHECK(base[0] == 0);
    CHECK(base[2] == 0);

    // generic displacement: the point is (e1, e2, e1) for slope (1, 0)
    const BlockSpec d2 = BlockSpec::single(2, 1);
    const SurfaceElement<Element> lifted = lift(p10, d2);
    const Element e1 = Element::generator(d2, 0, 0);
    const Element e2 = Element::generator(d2, 0, 1);
    const std::array<Element, 3> gpt = element_point(lifted, e1, e2);
    CHECK(gpt[0] == e1);
    CHECK(gpt[1] == e2);
    CHECK(gpt[2] == e1);
  }

  TEST_CASE("calotte_point") {
    const Calotte<double> k{0, 0, 0, 0, 0, 2, 0, 0};
    const double h = 0.5;
    const std::array<double, 3> pt = calotte_point(k, h, 0.0);
    CHECK(pt[0] == h);
    CHECK(pt[1] == 0);
    CHECK(pt[2] == h * h);

    const std::array<double, 3> base = calotte_point(k, 0.0, 0.0);
    CHECK(base[2] == 0);

    // second-order displacements survive, third order dies
    const BlockSpec d22 = BlockSpec::single(2, 2);
    const Element dx = Element::generator(d22, 0, 0);
    const Element dy = Element::generator(d22, 0, 1);
    CHECK_FALSE((dx * dy).is_zero());
    CHECK((dx * dx * dy).is_zero());
    const Calotte<double> full{0, 0, 0, 1, 2, 3, 4, 5};
    const std::array<Element, 3> gpt = calotte_point(lift(full, d22), dx, dy);
    const Element expected =
        dx * 1.0 + dy * 2.0 + dx * dx * 1.5 + dx * dy * 4.0 + dy * dy * 2.5;
    CHECK(gpt[2] == expected);
  }

  TEST_CASE("united_position") {
    const SurfaceElement<double> p{0, 0, 0, 1, 2};
    CHECK(united_position(p, {0.01, 0.02, 0.05, 0.1, 0.1}));
    CHECK(united_position(p, {0, 0, 0, 0, 0}));  // reflexive
    CHECK_FALSE(united_position(p, {0.01, 0.02, 0.06, 0.1, 0.1}));
  }

  TEST_CASE("belongs_to") {
    const Calotte<double> k{0, 0, 0, 1, 2, 3, 4, 5};
    const SurfaceElement<double> p = restriction(k);
    const double h = 0.01;
    CHECK(belongs_to(p, h, 0, 3 * h, 4 * h, k));
    CHECK_FALSE(belongs_to(p, h, 0, 3 * h, 4.5 * h, k));
    CHECK_FALSE(belongs_to(p, h, 0, 2 * h, 4 * h, k));
    CHECK(belongs_to(p, 0, 0, 0, 0, k));

    const Calotte<double> flat{0, 0, 0, 1, 2, 0, 0, 0};
    CHECK(belongs_to(p, 0.3, -0.2, 0, 0, flat));

    const SurfaceElement<double> other{1, 0, 0, 1, 2};
    CHECK_THROWS_AS(belongs_to(other, h, 0, 3 * h, 4 * h, k), Error);
  }

  TEST_CASE("graph jets") {
    const GraphSurface plane = GraphSurface::parse("x");
    const SurfaceElement<double> j = plane.jet1(0, 0);
    CHECK(j.z == 0);
    CHECK(j.p == 1);
    CHECK(j.q == 0);

    // cone through the origin with apex over (1, 0): slope (1, 0) at 0
    const GraphSurface cone = GraphSurface::parse("1 - sqrt((x-1)^2 + y^2)");
    const SurfaceElement<double> jc = cone.jet1(0, 0);
    CHECK(jc.z == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(jc.p == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(jc.q == doctest::Approx(0.0).epsilon(1e-15));

    const GraphSurface parabola = GraphSurface::parse("x^2/2");
    const Calotte<double> k = parabola.jet2(0, 0);
    CHECK(k.z == 0);
    CHECK(k.p == 0);
    CHECK(k.r == 1);
    CHECK(k.s == 0);
    CHECK(k.t == 0);
  }

  TEST_CASE("second-order jet restricts to the first-order jet") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const char* graphs[] = {"x^2/2 + x*y", "sin(x)*cos(y)", "exp(x - y^2)",
                            "1 - sqrt((x-3)^2 + y^2)"};
    for (const char* g : graphs) {
      const GraphSurface surface = GraphSurface::parse(g);
      for (int i = 0; i < 20; ++i) {
        const double x0 = u(rng), y0 = u(rng);
        const SurfaceElement<double> j1 = surface.jet1(x0, y0);
        const SurfaceElement<double> j2 = restriction(surface.jet2(x0, y0));
        CHECK(j1.x == j2.x);
        CHECK(j1.z == j2.z);
        CHECK(j1.p == j2.p);
        CHECK(j1.q == j2.q);
      }
    }
  }

  TEST_CASE("calotte membership implies united position, generically") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    const BlockSpec d2 = BlockSpec::single(2, 1);
    const Element dx = Element::generator(d2, 0, 0);
    const Element dy = Element::generator(d2, 0, 1);
    for (int i = 0; i < 30; ++i) {
      const Calotte<double> k{u(rng), u(rng), u(rng), u(rng),
                              u(rng), u(rng), u(rng), u(rng)};
      const Calotte<Element> kg = lift(k, d2);
      const SurfaceElement<Element> p = restriction(kg);
      // the slope offsets a member element must carry
      const Element dp = kg.r * dx + kg.s * dy;
      const Element dq = kg.s * dx + kg.t * dy;
      CHECK(belongs_to(p, dx, dy, dp, dq, kg, 1e-12));
      const Displacement<Element> d{dx, dy, p.p * dx + p.q * dy, dp, dq};
      CHECK(united_position(p, d, 1e-12));
    }
  }

  TEST_CASE("base point recovered through element_point, generically") {
    const BlockSpec two({{2, 1}, {2, 1}});
    const SurfaceElement<Element> p = lift({0, 0, 0, 1.5, -2.0}, two);
    for (double zeta : {0.0, 0.6}) {
      const Element cx = Element::generator(two, 0, 0) * zeta;
      const Element cy = Element::generator(two, 0, 1) * zeta;
      const std::array<Element, 3> candidate = element_point(p, cx, cy);
      bool all_zero = true;
      for (int i = 0; i < 2; ++i) {
        const Element w = candidate[static_cast<std::size_t>(i)];
        const Element u = Element::generator(two, 1, i);
        const Element coeff =
            ((w + u) * (w + u)).coefficient_of(two.generator_offset(1) + i);
        CHECK(coeff == w * 2.0);  // the stability defect is exactly 2w
        all_zero = all_zero && coeff.is_zero();
      }
      // only the true base point (zeta = 0) survives the stability test
      CHECK(all_zero == (zeta == 0.0));
    }
  }
}
